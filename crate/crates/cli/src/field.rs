//! Literal construction in each supported coefficient field.

use germcalc::coeff::{CycloCtx, Cyclotomic, Field, FieldSpec, GaussianRational, Scalar};
use num_complex::Complex64;

pub trait CliField: Field {
    /// The printed coefficient forms `(a+bi)`, `(a+bj)`, `poly(m; …)`.
    fn from_scalar(s: &Scalar, spec: FieldSpec) -> Result<Self, String>;

    /// A primitive `m`-th root of unity, `e^{2πi/m}` under the embedding
    /// `ζ_m ↦ e^{2πi/m}`.
    fn zeta(m: u64, spec: FieldSpec) -> Result<Self, String>;

    fn from_f64(_x: f64) -> Option<Self> {
        None
    }
}

impl CliField for GaussianRational {
    fn from_scalar(s: &Scalar, _spec: FieldSpec) -> Result<Self, String> {
        match s {
            Scalar::Gaussian(g) => Ok(g.clone()),
            Scalar::Cyclotomic(c) => c
                .as_rational()
                .map(|q| Self::from_rational(&q))
                .ok_or_else(|| format!("`{c}` is not in Q(i)")),
            Scalar::Float(_) => Err("decimal coefficients need --field f64".into()),
        }
    }

    fn zeta(m: u64, _spec: FieldSpec) -> Result<Self, String> {
        Self::primitive_root(m).ok_or_else(|| format!("Q(i) has no primitive {m}-th root of unity; use --field cyclotomic:M"))
    }
}

impl CliField for Cyclotomic {
    fn from_scalar(s: &Scalar, spec: FieldSpec) -> Result<Self, String> {
        let FieldSpec::Cyclotomic(m) = spec else {
            return Err(format!("field {spec} is not cyclotomic"));
        };
        if let Scalar::Cyclotomic(c) = s {
            if let Some(q) = c.as_rational() {
                return Ok(Self::from_rational(&q));
            }
        }
        match s.embed(m).map_err(|e| e.to_string())? {
            Scalar::Cyclotomic(c) => Ok(c),
            _ => Err(format!("`{s}` does not embed into Q(zeta_{m})")),
        }
    }

    fn zeta(k: u64, spec: FieldSpec) -> Result<Self, String> {
        let FieldSpec::Cyclotomic(m) = spec else {
            return Err(format!("field {spec} is not cyclotomic"));
        };
        match k {
            1 => Ok(Self::from_i64(1)),
            2 => Ok(Self::from_i64(-1)),
            _ if m % k == 0 => Ok(Self::zeta_pow(&CycloCtx::new(m), (m / k) as i64)),
            _ => Err(format!("zeta{k} is not in Q(zeta_{m}); {k} must divide {m}")),
        }
    }
}

impl CliField for Complex64 {
    fn from_scalar(s: &Scalar, _spec: FieldSpec) -> Result<Self, String> {
        Ok(s.to_complex())
    }

    fn zeta(m: u64, _spec: FieldSpec) -> Result<Self, String> {
        Self::primitive_root(m).ok_or_else(|| "zeta0 is undefined".to_string())
    }

    fn from_f64(x: f64) -> Option<Self> {
        Some(Complex64::new(x, 0.0))
    }
}
