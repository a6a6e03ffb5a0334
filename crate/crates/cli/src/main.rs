fn main() {
    std::process::exit(germcalc_cli::run(std::env::args_os()));
}
