use germcalc::coeff::{Cyclotomic, FieldSpec, GaussianRational};
use proptest::prelude::*;

use super::*;
use crate::eval::{Evaluator, Value};

fn ctx(n: usize) -> ParseContext {
    ParseContext::new(n, FieldSpec::Gaussian)
}

fn diag(src: &str, c: &ParseContext) -> Diagnostic {
    parse(src, c).expect_err(src)
}

#[test]
fn one_form_parses() {
    let e = parse("x*dy - y*dx", &ctx(2)).unwrap();
    let ExprKind::Binary(BinOp::Sub, a, _) = &e.kind else {
        panic!("{e:?}")
    };
    assert!(matches!(a.kind, ExprKind::Binary(BinOp::Mul, ..)));
    let v: Value<GaussianRational> = Evaluator::new(2, 4, FieldSpec::Gaussian).eval(&e).unwrap();
    assert_eq!(v.kind(), "1-form");
}

#[test]
fn logform_parses_and_evaluates() {
    let c = ParseContext::new(3, FieldSpec::Cyclotomic(3));
    let e = parse("logform{ 1*dlog(x) + zeta3*dlog(y) + zeta3^2*dlog(z) }", &c).unwrap();
    assert!(matches!(e.kind, ExprKind::LogForm(_)));
    let v: Value<Cyclotomic> = Evaluator::new(3, 4, c.field).eval(&e).unwrap();
    let Value::LogForm(l) = v else { panic!() };
    let r = l.residues();
    assert_eq!(r.len(), 3);
    assert_eq!(r[1].clone() * r[1].clone(), r[2]);
}

#[test]
fn unclosed_call_points_past_the_comma() {
    let d = diag("wedge(dx,", &ctx(2));
    assert_eq!((d.span.line, d.span.col), (1, 10));
}

#[test]
fn diagnostics_are_positioned() {
    let c = ctx(2);
    assert_eq!(diag("x + w", &c).span, Span { line: 1, col: 5 });
    assert_eq!(diag("x +\n  * y", &c).span, Span { line: 2, col: 3 });
    assert!(diag("z", &c).message.contains("unknown name"));
    assert!(diag("iv(dx)", &c).message.contains("takes 2"));
    assert!(diag("wedge(dx)", &c).message.contains("at least 2"));
    assert!(diag("0.5*x", &c).message.contains("f64"));
    assert!(diag("zeta0", &c).message.contains("zetaM"));
    assert!(diag("x^y", &c).message.contains("exponent"));
    assert!(diag("x^99999999999", &c).message.contains("too large"));
    assert!(diag("x $ y", &c).message.contains("unexpected character"));
    assert!(diag("(x", &c).message.contains("`)`"));
    assert!(diag("x y", &c).message.contains("after expression"));
    let deep = format!("{}x{}", "(".repeat(500), ")".repeat(500));
    assert!(diag(&deep, &c).message.contains("nested"));
}

#[test]
fn variable_aliases() {
    let c = ctx(3);
    assert_eq!(parse("z", &c).unwrap(), parse("z3", &c).unwrap());
    assert_eq!(parse("dx", &c).unwrap(), parse("dz1", &c).unwrap());
    let c4 = ctx(4);
    assert!(parse("x", &c4).is_err());
    assert!(parse("z4 + dz4", &c4).is_ok());
    assert!(parse("z5", &c4).is_err());
    assert!(parse("z01", &c4).is_err());
}

#[test]
fn printed_coefficients_are_literals() {
    let c = ctx(2);
    for s in ["(0+1i)*x", "(3/2-1/5i)*y", "poly(3; 0,1)*x", "-(1+2i)"] {
        let e = parse(s, &c).unwrap();
        assert_eq!(parse(&print(&e, &c.names()), &c).unwrap(), e);
    }
    // with spaces it is ordinary arithmetic
    assert!(matches!(parse("(1 + 2*i)", &c).unwrap().kind, ExprKind::Binary(BinOp::Add, ..)));
    let f = ParseContext::new(1, FieldSpec::Float);
    assert!(matches!(parse("(0.5-2j)", &f).unwrap().kind, ExprKind::Coeff(_)));
}

#[test]
fn evaluation_errors_are_positioned() {
    let c = ctx(2);
    let ev = Evaluator::new(2, 4, FieldSpec::Gaussian);
    let e = parse("dx + x", &c).unwrap();
    let er = ev.eval::<GaussianRational>(&e).unwrap_err();
    assert!(er.message.contains("cannot add"));
    let e = parse("x + dlog(y)", &c).unwrap();
    assert_eq!(ev.eval::<GaussianRational>(&e).unwrap_err().span, Span { line: 1, col: 5 });
    let e = parse("zeta3*x", &c).unwrap();
    assert!(ev.eval::<GaussianRational>(&e).unwrap_err().message.contains("cyclotomic"));
    let e = parse("dx/x", &c).unwrap();
    assert!(ev.eval::<GaussianRational>(&e).unwrap_err().message.contains("vanishing"));
    let e = parse("[x]", &c).unwrap();
    assert!(ev.eval::<GaussianRational>(&e).unwrap_err().message.contains("expected 2"));
}

fn arb_expr(n: usize) -> impl Strategy<Value = Expr> {
    let sp = Span::default();
    let leaf = prop_oneof![
        (0u64..1000).prop_map(move |k| Expr::new(ExprKind::Int(k.to_string()), sp)),
        prop_oneof![Just("(0+1i)"), Just("(-3/2+1/5i)"), Just("poly(3; 0,1)"), Just("(2-7i)")]
            .prop_map(move |s| Expr::new(ExprKind::Coeff(s.to_string()), sp)),
        Just(Expr::new(ExprKind::ImagUnit, sp)),
        (1u64..13).prop_map(move |m| Expr::new(ExprKind::Zeta(m), sp)),
        (0..n).prop_map(move |i| Expr::new(ExprKind::Var(i), sp)),
        (0..n).prop_map(move |i| Expr::new(ExprKind::Differential(i), sp)),
    ];
    leaf.prop_recursive(5, 48, 4, move |inner| {
        let b = |k| Box::new(k);
        prop_oneof![
            inner.clone().prop_map(move |a| Expr::new(ExprKind::Neg(b(a)), sp)),
            (inner.clone(), inner.clone(), 0usize..4).prop_map(move |(a, c, o)| {
                let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][o];
                Expr::new(ExprKind::Binary(op, b(a), b(c)), sp)
            }),
            (inner.clone(), 0u32..6).prop_map(move |(a, k)| Expr::new(ExprKind::Pow(b(a), k), sp)),
            (inner.clone(), 0usize..2).prop_map(move |(a, f)| {
                Expr::new(ExprKind::Call([Func::D, Func::Dlog][f], vec![a]), sp)
            }),
            proptest::collection::vec(inner.clone(), 2..4)
                .prop_map(move |a| Expr::new(ExprKind::Call(Func::Wedge, a), sp)),
            (inner.clone(), inner.clone(), 0usize..2).prop_map(move |(a, c, f)| {
                Expr::new(ExprKind::Call([Func::Iv, Func::Lie][f], vec![a, c]), sp)
            }),
            proptest::collection::vec(inner.clone(), 1..4).prop_map(move |a| Expr::new(ExprKind::Tuple(a), sp)),
            inner.prop_map(move |a| Expr::new(ExprKind::LogForm(b(a)), sp)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_then_parse_is_identity((n, e) in (1usize..5).prop_flat_map(|n| (Just(n), arb_expr(n)))) {
        let c = ctx(n);
        let text = print(&e, &c.names());
        let back = parse(&text, &c);
        prop_assert_eq!(back.as_ref().ok(), Some(&e), "{}", text);
        // printing is a fixed point
        prop_assert_eq!(print(&back.unwrap(), &c.names()), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Malformed input yields a diagnostic or an evaluation error, never a panic.
    #[test]
    fn arbitrary_text_never_panics(src in "[-+*/^()\\[\\]{},. 0-9a-z_;]{0,40}") {
        let c = ParseContext::new(3, FieldSpec::Cyclotomic(12));
        if let Ok(e) = parse(&src, &c) {
            let _ = Evaluator::new(3, 3, c.field).eval::<Cyclotomic>(&e);
        }
    }

    #[test]
    fn tokens_soup_never_panics(parts in proptest::collection::vec(
        prop_oneof![Just("x"), Just("dx"), Just("+"), Just("*"), Just("("), Just(")"), Just("wedge("),
            Just("logform{"), Just("}"), Just("dlog("), Just(","), Just("["), Just("]"), Just("^2"),
            Just("zeta4"), Just("i"), Just("/"), Just("-"), Just("iv("), Just("lie("), Just("d(")], 0..24)) {
        let src: String = parts.concat();
        let c = ParseContext::new(2, FieldSpec::Gaussian);
        if let Ok(e) = parse(&src, &c) {
            let _ = Evaluator::new(2, 3, c.field).eval::<GaussianRational>(&e);
        }
    }
}
