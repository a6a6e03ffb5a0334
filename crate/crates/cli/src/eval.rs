//! Evaluation of parsed expressions into jets, forms, maps and log forms.

use std::fmt;

use germcalc::calculus::{DiffeoJet, PForm, VectorField};
use germcalc::coeff::{FieldSpec, Scalar};
use germcalc::jets::Jet;
use germcalc::logforms::LogForm;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::dsl::{BinOp, Expr, ExprKind, Func, Span};
use crate::field::CliField;

/// Powers above this are refused rather than computed.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalError {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

fn err<T>(span: Span, message: impl Into<String>) -> Result<T, EvalError> {
    Err(EvalError {
        span,
        message: message.into(),
    })
}

#[derive(Clone, Debug)]
pub enum Value<F: CliField> {
    /// A p-form; functions are 0-forms.
    Form(PForm<F>),
    /// `[e1, …, en]`.
    Tuple(Vec<Jet<F>>),
    /// `Σ λ·dlog(f)` inside `logform{}`.
    LogSum(Vec<(F, Jet<F>)>),
    LogForm(LogForm<F>),
}

impl<F: CliField> Value<F> {
    pub fn kind(&self) -> String {
        match self {
            Value::Form(w) if w.degree() == 0 => "function".into(),
            Value::Form(w) => format!("{}-form", w.degree()),
            Value::Tuple(_) => "tuple".into(),
            Value::LogSum(_) => "dlog sum".into(),
            Value::LogForm(_) => "logform".into(),
        }
    }
}

pub struct Evaluator {
    pub n: usize,
    pub order: usize,
    pub field: FieldSpec,
}

impl Evaluator {
    pub fn new(n: usize, order: usize, field: FieldSpec) -> Self {
        Self { n, order, field }
    }

    fn constant<F: CliField>(&self, c: F) -> Value<F> {
        Value::Form(PForm::function(Jet::constant(self.n, self.order, c)))
    }

    pub fn eval<F: CliField>(&self, e: &Expr) -> Result<Value<F>, EvalError> {
        self.eval_in(e, false)
    }

    fn eval_in<F: CliField>(&self, e: &Expr, in_log: bool) -> Result<Value<F>, EvalError> {
        let span = e.span;
        let lift = |r: Result<F, String>| r.or_else(|m| err(span, m));
        Ok(match &e.kind {
            ExprKind::Int(s) => {
                let k: BigInt = s.parse().or_else(|_| err(span, format!("bad integer `{s}`")))?;
                self.constant(F::from_rational(&BigRational::from_integer(k)))
            }
            ExprKind::Decimal(s) => {
                let x: f64 = s.parse().or_else(|_| err(span, format!("bad decimal `{s}`")))?;
                match F::from_f64(x) {
                    Some(c) => self.constant(c),
                    None => return err(span, format!("decimal `{s}` needs --field f64")),
                }
            }
            ExprKind::Coeff(s) => {
                if let Some(m) = poly_modulus(s) {
                    let limit = match self.field {
                        FieldSpec::Cyclotomic(k) => k,
                        FieldSpec::Gaussian => 4,
                        FieldSpec::Float => crate::DEFAULT_MAX_CYCLOTOMIC,
                    };
                    if m > limit {
                        return err(span, format!("poly({m}; …) does not lie in the field {}", self.field));
                    }
                }
                let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
                let sc: Scalar = inner.parse().or_else(|e| err(span, format!("{e}")))?;
                self.constant(lift(F::from_scalar(&sc, self.field))?)
            }
            ExprKind::ImagUnit => self.constant(lift(F::zeta(4, self.field))?),
            ExprKind::Zeta(m) => self.constant(lift(F::zeta(*m, self.field))?),
            ExprKind::Var(i) => Value::Form(PForm::function(Jet::var(self.n, self.order, *i))),
            ExprKind::Differential(i) => Value::Form(PForm::dz(self.n, self.order, *i)),
            ExprKind::Neg(a) => self.neg(self.eval_in(a, in_log)?),
            ExprKind::Binary(op, a, b) => {
                let x = self.eval_in(a, in_log)?;
                let y = self.eval_in(b, in_log)?;
                self.binary(*op, x, y, span)?
            }
            ExprKind::Pow(a, k) => {
                if *k > MAX_EXPONENT {
                    return err(span, format!("exponent {k} exceeds {MAX_EXPONENT}"));
                }
                match self.eval_in(a, in_log)? {
                    Value::Form(w) if w.degree() == 0 => Value::Form(PForm::function(w.as_function().pow(*k))),
                    v => return err(span, format!("cannot raise a {} to a power", v.kind())),
                }
            }
            ExprKind::Call(f, args) => self.call(*f, args, span, in_log)?,
            ExprKind::Tuple(es) => {
                if es.len() != self.n {
                    return err(span, format!("expected {} entries, got {}", self.n, es.len()));
                }
                let comps = es
                    .iter()
                    .map(|x| self.function(x, in_log))
                    .collect::<Result<Vec<_>, _>>()?;
                Value::Tuple(comps)
            }
            ExprKind::LogForm(body) => {
                if in_log {
                    return err(span, "nested logform");
                }
                match self.eval_in(body, true)? {
                    Value::LogSum(terms) => {
                        let l = LogForm::logarithmic(terms).or_else(|e| err(span, e.to_string()))?;
                        Value::LogForm(l)
                    }
                    v => return err(span, format!("logform body must be a sum of λ*dlog(f), got a {}", v.kind())),
                }
            }
        })
    }

    fn function<F: CliField>(&self, e: &Expr, in_log: bool) -> Result<Jet<F>, EvalError> {
        match self.eval_in(e, in_log)? {
            Value::Form(w) if w.degree() == 0 => Ok(w.as_function()),
            v => err(e.span, format!("expected a function, got a {}", v.kind())),
        }
    }

    fn neg<F: CliField>(&self, v: Value<F>) -> Value<F> {
        let m1 = F::from_i64(-1);
        match v {
            Value::Form(w) => Value::Form(w.scale(&m1)),
            Value::Tuple(t) => Value::Tuple(t.iter().map(|j| j.scale(&m1)).collect()),
            Value::LogSum(t) => Value::LogSum(t.into_iter().map(|(l, f)| (-l, f)).collect()),
            Value::LogForm(mut l) => {
                for b in &mut l.branches {
                    b.lambda = -b.lambda.clone();
                }
                l.h = l.h.scale(&m1);
                Value::LogForm(l)
            }
        }
    }

    fn binary<F: CliField>(&self, op: BinOp, x: Value<F>, y: Value<F>, span: Span) -> Result<Value<F>, EvalError> {
        let mismatch = |x: &Value<F>, y: &Value<F>| {
            let verb = match op {
                BinOp::Add => "add",
                BinOp::Sub => "subtract",
                BinOp::Mul => "multiply",
                BinOp::Div => "divide",
            };
            err(span, format!("cannot {verb} a {} and a {}", x.kind(), y.kind()))
        };
        let m1 = F::from_i64(-1);
        match op {
            BinOp::Add | BinOp::Sub => {
                let sub = op == BinOp::Sub;
                match (x, y) {
                    (Value::Form(a), Value::Form(b)) if a.degree() == b.degree() => {
                        Ok(Value::Form(if sub { &a - &b } else { &a + &b }))
                    }
                    (Value::Tuple(a), Value::Tuple(b)) => Ok(Value::Tuple(
                        a.iter().zip(&b).map(|(p, q)| if sub { p - q } else { p + q }).collect(),
                    )),
                    (Value::LogSum(mut a), Value::LogSum(b)) => {
                        a.extend(b.into_iter().map(|(l, f)| (if sub { l * m1.clone() } else { l }, f)));
                        Ok(Value::LogSum(a))
                    }
                    (x, y) => mismatch(&x, &y),
                }
            }
            BinOp::Mul => match (x, y) {
                (Value::Form(a), Value::Form(b)) => {
                    a.wedge(&b).map(Value::Form).or_else(|e| err(span, e.to_string()))
                }
                (Value::Form(a), Value::Tuple(t)) | (Value::Tuple(t), Value::Form(a)) if a.degree() == 0 => {
                    let f = a.as_function();
                    Ok(Value::Tuple(t.iter().map(|j| &f * j).collect()))
                }
                (Value::Form(a), Value::LogSum(t)) | (Value::LogSum(t), Value::Form(a)) => {
                    let c = self.as_constant(&a, span, "dlog terms can only be scaled by constants")?;
                    Ok(Value::LogSum(t.into_iter().map(|(l, f)| (c.clone() * l, f)).collect()))
                }
                (x, y) => mismatch(&x, &y),
            },
            BinOp::Div => {
                let Value::Form(b) = &y else {
                    return mismatch(&x, &y);
                };
                if b.degree() != 0 {
                    return mismatch(&x, &y);
                }
                let inv = b
                    .as_function()
                    .unit_inverse()
                    .or_else(|_| err(span, "division by a function vanishing at the origin"))?;
                match x {
                    Value::Form(a) => Ok(Value::Form(a.mul_function(&inv))),
                    Value::Tuple(t) => Ok(Value::Tuple(t.iter().map(|j| j * &inv).collect())),
                    Value::LogSum(t) => {
                        let c = self.as_constant(b, span, "dlog terms can only be divided by constants")?;
                        let ci = c.inv().expect("unit");
                        Ok(Value::LogSum(t.into_iter().map(|(l, f)| (l * ci.clone(), f)).collect()))
                    }
                    x => mismatch(&x, &y),
                }
            }
        }
    }

    fn as_constant<F: CliField>(&self, w: &PForm<F>, span: Span, msg: &str) -> Result<F, EvalError> {
        if w.degree() != 0 {
            return err(span, msg);
        }
        let f = w.as_function();
        let c = f.constant_term();
        if f.terms().all(|(e, x)| e.iter().all(|&k| k == 0) || x.is_negligible()) {
            Ok(c)
        } else {
            err(span, msg)
        }
    }

    fn call<F: CliField>(&self, f: Func, args: &[Expr], span: Span, in_log: bool) -> Result<Value<F>, EvalError> {
        let calc = |r: Result<PForm<F>, germcalc::calculus::CalcError>| r.map(Value::Form).or_else(|e| err(span, e.to_string()));
        match f {
            Func::D => match self.eval_in(&args[0], in_log)? {
                Value::Form(w) => Ok(Value::Form(w.d())),
                v => err(span, format!("d() needs a form, got a {}", v.kind())),
            },
            Func::Dlog => {
                if !in_log {
                    return err(span, "dlog() is only allowed inside logform{ … }");
                }
                let g = self.function(&args[0], false)?;
                Ok(Value::LogSum(vec![(F::from_i64(1), g)]))
            }
            Func::Wedge => {
                let mut acc = self.form(&args[0], in_log)?;
                for a in &args[1..] {
                    acc = acc.wedge(&self.form(a, in_log)?).or_else(|e| err(span, e.to_string()))?;
                }
                Ok(Value::Form(acc))
            }
            Func::Iv | Func::Lie => {
                let x = self.vector_field(&args[0], in_log)?;
                let w = self.form(&args[1], in_log)?;
                if f == Func::Iv {
                    calc(w.interior(&x))
                } else {
                    calc(w.lie(&x))
                }
            }
        }
    }

    fn form<F: CliField>(&self, e: &Expr, in_log: bool) -> Result<PForm<F>, EvalError> {
        match self.eval_in(e, in_log)? {
            Value::Form(w) => Ok(w),
            v => err(e.span, format!("expected a form, got a {}", v.kind())),
        }
    }

    fn vector_field<F: CliField>(&self, e: &Expr, in_log: bool) -> Result<VectorField<F>, EvalError> {
        match self.eval_in(e, in_log)? {
            Value::Tuple(t) => VectorField::new(t).or_else(|x| err(e.span, x.to_string())),
            v => err(e.span, format!("expected a vector field [X1, …, Xn], got a {}", v.kind())),
        }
    }
}

/// `M` in a `poly(M; …)` literal.
fn poly_modulus(s: &str) -> Option<u64> {
    s.strip_prefix("poly(")?.split(';').next()?.trim().parse().ok()
}

/// Interprets a tuple as a diffeomorphism germ.
pub fn to_map<F: CliField>(v: Value<F>) -> Result<DiffeoJet<F>, String> {
    match v {
        Value::Tuple(t) => DiffeoJet::new(t).map_err(|e| e.to_string()),
        v => Err(format!("expected a map [f1, …, fn], got a {}", v.kind())),
    }
}

pub fn to_field<F: CliField>(v: Value<F>) -> Result<VectorField<F>, String> {
    match v {
        Value::Tuple(t) => VectorField::new(t).map_err(|e| e.to_string()),
        v => Err(format!("expected a vector field [X1, …, Xn], got a {}", v.kind())),
    }
}
