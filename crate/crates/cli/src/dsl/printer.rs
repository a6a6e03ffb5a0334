use super::ast::{BinOp, Expr, ExprKind};

/// Binding strength; atoms bind tightest.
fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        ExprKind::Neg(_) => 3,
        ExprKind::Pow(..) => 4,
        _ => 5,
    }
}

fn wrap(e: &Expr, names: &[String], parens: bool) -> String {
    let s = print(e, names);
    if parens {
        format!("({s})")
    } else {
        s
    }
}

fn list(es: &[Expr], names: &[String]) -> String {
    es.iter().map(|e| print(e, names)).collect::<Vec<_>>().join(", ")
}

/// Canonical text; parsing it gives back the same tree.
pub fn print(e: &Expr, names: &[String]) -> String {
    match &e.kind {
        ExprKind::Int(s) | ExprKind::Decimal(s) | ExprKind::Coeff(s) => s.clone(),
        ExprKind::ImagUnit => "i".into(),
        ExprKind::Zeta(m) => format!("zeta{m}"),
        ExprKind::Var(i) => names[*i].clone(),
        ExprKind::Differential(i) => format!("d{}", names[*i]),
        ExprKind::Neg(a) => format!("-{}", wrap(a, names, prec(a) < 3)),
        ExprKind::Binary(op, a, b) => {
            let p = if matches!(op, BinOp::Add | BinOp::Sub) { 1 } else { 2 };
            let sym = match op {
                BinOp::Add => " + ",
                BinOp::Sub => " - ",
                BinOp::Mul => "*",
                BinOp::Div => "/",
            };
            format!("{}{sym}{}", wrap(a, names, prec(a) < p), wrap(b, names, prec(b) <= p))
        }
        ExprKind::Pow(a, k) => format!("{}^{k}", wrap(a, names, prec(a) < 5)),
        ExprKind::Call(f, args) => format!("{}({})", f.name(), list(args, names)),
        ExprKind::Tuple(es) => format!("[{}]", list(es, names)),
        ExprKind::LogForm(body) => format!("logform{{ {} }}", print(body, names)),
    }
}
