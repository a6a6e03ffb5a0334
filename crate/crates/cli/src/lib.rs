//! Command-line front end: parses the expression language, dispatches to the
//! core library and prints a text or JSON report.
//!
//! Exit codes: 0 when the verdict is positive or the command has none, 1
//! when it is `no` or `unknown`, 2 on usage, parse or computation errors.

pub mod commands;
pub mod dsl;
pub mod eval;
pub mod field;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use germcalc::coeff::{Cyclotomic, FieldSpec, GaussianRational};
use num_complex::Complex64;
use serde_json::{json, Value as Json};
use thiserror::Error;

use commands::{run_catalog, run_generic, run_holonomy, Command, Session, Verdict};

pub const DEFAULT_MAX_CYCLOTOMIC: u64 = 360;
pub const MAX_VARS: usize = 8;
pub const MAX_ORDER: usize = 30;
/// Largest number of monomials of degree ≤ N allowed in one jet.
pub const MAX_BASIS: u128 = 200_000;

/// `C(n + N, n)`, the number of monomials of degree at most `N`.
fn basis_size(n: usize, order: usize) -> u128 {
    (1..=n as u128).fold(1, |acc, k| acc * (order as u128 + k) / k)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{what} {line}:{col}: {message}")]
    Parse {
        what: String,
        line: u32,
        col: u32,
        message: String,
    },
    #[error("{what}: {message}")]
    Input { what: String, message: String },
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn input(what: &str, message: impl Into<String>) -> Self {
        CliError::Input {
            what: what.to_string(),
            message: message.into(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Input { .. } => "input",
            CliError::Math(_) => "computation",
        }
    }

    fn to_json(&self) -> Json {
        let mut e = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Parse { what, line, col, message } = self {
            e["argument"] = json!(what);
            e["line"] = json!(line);
            e["col"] = json!(col);
            e["message"] = json!(message);
        }
        json!({ "error": e })
    }
}

#[derive(Parser, Debug)]
#[command(name = "germcalc", version, about = "Exact jet calculus for germs of holomorphic foliations")]
pub struct Cli {
    /// Number of variables.
    #[arg(long, global = true, default_value_t = 2)]
    pub vars: usize,
    /// Truncation order N of every jet.
    #[arg(long, global = true, default_value_t = 6)]
    pub order: usize,
    /// Coefficient field: gaussian, cyclotomic:M or f64.
    #[arg(long, global = true, default_value = "gaussian")]
    pub field: String,
    /// Print a JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// `GERMCALC_MAX_CYCLOTOMIC`, default 360.
pub fn max_cyclotomic(var: Option<String>) -> Result<u64, CliError> {
    match var {
        None => Ok(DEFAULT_MAX_CYCLOTOMIC),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("GERMCALC_MAX_CYCLOTOMIC must be a positive integer, got `{s}`"))),
    }
}

fn execute(cli: &Cli, max_cyclo: u64) -> Result<(FieldSpec, Verdict, Json), CliError> {
    let field: FieldSpec = cli
        .field
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown field `{}`; use gaussian, cyclotomic:M or f64", cli.field)))?;
    if let FieldSpec::Cyclotomic(m) = field {
        if m > max_cyclo {
            return Err(CliError::Usage(format!(
                "cyclotomic:{m} exceeds GERMCALC_MAX_CYCLOTOMIC = {max_cyclo}"
            )));
        }
    }
    if !(1..=MAX_VARS).contains(&cli.vars) {
        return Err(CliError::Usage(format!("--vars must be between 1 and {MAX_VARS}")));
    }
    if !(1..=MAX_ORDER).contains(&cli.order) {
        return Err(CliError::Usage(format!("--order must be between 1 and {MAX_ORDER}")));
    }
    if basis_size(cli.vars, cli.order) > MAX_BASIS {
        return Err(CliError::Usage(format!(
            "{} variables at order {} exceed {MAX_BASIS} monomials per jet",
            cli.vars, cli.order
        )));
    }
    let session = Session {
        n: cli.vars,
        order: cli.order,
        field,
    };
    let (field, (verdict, result)) = match &cli.command {
        Command::Holonomy(a) => (FieldSpec::Float, run_holonomy(a, cli.order)?),
        Command::Catalog { action } => (field, run_catalog(action, max_cyclo)?),
        cmd => (
            field,
            match field {
                FieldSpec::Gaussian => run_generic::<GaussianRational>(cmd, &session)?,
                FieldSpec::Cyclotomic(_) => run_generic::<Cyclotomic>(cmd, &session)?,
                FieldSpec::Float => run_generic::<Complex64>(cmd, &session)?,
            },
        ),
    };
    Ok((field, verdict, result))
}

fn render_text(out: &mut dyn Write, command: &str, verdict: Verdict, result: &Json) -> std::io::Result<()> {
    writeln!(out, "command: {command}")?;
    if verdict != Verdict::None {
        writeln!(out, "verdict: {}", verdict.as_str())?;
    }
    if let Some(lines) = result.get("transcript").and_then(Json::as_array) {
        for l in lines {
            writeln!(out, "{}", l.as_str().unwrap_or_default())?;
        }
        return Ok(());
    }
    let Some(obj) = result.as_object() else {
        return writeln!(out, "{result}");
    };
    for (k, v) in obj {
        match v {
            Json::Null => {}
            Json::String(s) => writeln!(out, "{k}: {s}")?,
            Json::Array(items) if items.iter().all(|x| x.is_string()) => {
                writeln!(out, "{k}:")?;
                for x in items {
                    writeln!(out, "  {}", x.as_str().unwrap_or_default())?;
                }
            }
            Json::Array(items) if items.iter().all(Json::is_object) && k == "scenarios" => {
                for x in items {
                    writeln!(out, "{}  {}", x["id"].as_str().unwrap_or_default(), x["summary"].as_str().unwrap_or_default())?;
                }
            }
            other => writeln!(out, "{k}: {other}")?,
        }
    }
    Ok(())
}

/// Runs one invocation, writing to the given streams; returns the exit code.
pub fn run_with<I, T>(args: I, max_cyclo_var: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let outcome = max_cyclotomic(max_cyclo_var).and_then(|m| execute(&cli, m));
    match outcome {
        Ok((field, verdict, result)) => {
            let written = if cli.json {
                let report = json!({
                    "command": cli.command.name(),
                    "field": field.to_string(),
                    "vars": cli.vars,
                    "order": cli.order,
                    "verdict": verdict.as_str(),
                    "result": result,
                });
                serde_json::to_string_pretty(&report)
                    .map_err(std::io::Error::other)
                    .and_then(|s| writeln!(out, "{s}"))
            } else {
                render_text(out, cli.command.name(), verdict, &result)
            };
            match written {
                Ok(()) if verdict.passed() => 0,
                Ok(()) => 1,
                Err(_) => 2,
            }
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&e.to_json()).unwrap_or_default());
            }
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(
        args,
        std::env::var("GERMCALC_MAX_CYCLOTOMIC").ok(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}
