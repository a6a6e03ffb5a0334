use std::fmt;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    D,
    Dlog,
    Wedge,
    Iv,
    Lie,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::D => "d",
            Func::Dlog => "dlog",
            Func::Wedge => "wedge",
            Func::Iv => "iv",
            Func::Lie => "lie",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "d" => Func::D,
            "dlog" => Func::Dlog,
            "wedge" => Func::Wedge,
            "iv" => Func::Iv,
            "lie" => Func::Lie,
            _ => return None,
        })
    }

    /// Allowed argument counts `(min, max)`.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Func::D | Func::Dlog => (1, 1),
            Func::Wedge => (2, usize::MAX),
            Func::Iv | Func::Lie => (2, 2),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    /// Decimal digits of a non-negative integer.
    Int(String),
    /// Decimal with a point or exponent; only valid over f64.
    Decimal(String),
    /// A coefficient in printed form, `(a+bi)`, `(a+bj)` or `poly(m; …)`.
    Coeff(String),
    ImagUnit,
    /// `zetaM`, a primitive M-th root of unity.
    Zeta(u64),
    Var(usize),
    /// `dx`, `dz3`, …
    Differential(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Vec<Expr>),
    /// `[e1, …, en]`: a map or a vector field.
    Tuple(Vec<Expr>),
    /// `logform{ … }`.
    LogForm(Box<Expr>),
}

/// Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Self { kind, span }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Int(a), Int(b)) | (Decimal(a), Decimal(b)) | (Coeff(a), Coeff(b)) => a == b,
            (ImagUnit, ImagUnit) => true,
            (Zeta(a), Zeta(b)) => a == b,
            (Var(a), Var(b)) | (Differential(a), Differential(b)) => a == b,
            (Neg(a), Neg(b)) => a == b,
            (Binary(o, a, b), Binary(p, c, d)) => o == p && a == c && b == d,
            (Pow(a, k), Pow(b, l)) => k == l && a == b,
            (Call(f, a), Call(g, b)) => f == g && a == b,
            (Tuple(a), Tuple(b)) => a == b,
            (LogForm(a), LogForm(b)) => a == b,
            _ => false,
        }
    }
}
