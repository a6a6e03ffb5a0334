use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::float::{complex_text, parse_complex};
use super::{CoeffError, CycloCtx, Cyclotomic, Field, GaussianRational, FLOAT_ORDER_BOUND};

/// Which coefficient field a computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Gaussian,
    Cyclotomic(u64),
    Float,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Gaussian => write!(f, "gaussian"),
            FieldSpec::Cyclotomic(m) => write!(f, "cyclotomic:{}", m),
            FieldSpec::Float => write!(f, "f64"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = CoeffError;

    fn from_str(s: &str) -> Result<Self, CoeffError> {
        match s.trim() {
            "gaussian" | "qi" => Ok(FieldSpec::Gaussian),
            "f64" | "float" => Ok(FieldSpec::Float),
            other => {
                let m = other
                    .strip_prefix("cyclotomic:")
                    .and_then(|m| m.parse::<u64>().ok())
                    .filter(|&m| m > 0)
                    .ok_or_else(|| CoeffError::Parse(s.to_string()))?;
                Ok(FieldSpec::Cyclotomic(m))
            }
        }
    }
}

/// A coefficient tagged with its field, for text I/O and explicit embedding.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Gaussian(GaussianRational),
    Cyclotomic(Cyclotomic),
    Float(Complex64),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Gaussian(_) => FieldSpec::Gaussian,
            Scalar::Cyclotomic(c) => FieldSpec::Cyclotomic(c.modulus_index().unwrap_or(1)),
            Scalar::Float(_) => FieldSpec::Float,
        }
    }

    pub fn zero_in(spec: FieldSpec) -> Self {
        Self::from_rational_in(spec, &BigRational::zero())
    }

    pub fn one_in(spec: FieldSpec) -> Self {
        Self::from_rational_in(spec, &BigRational::one())
    }

    pub fn from_rational_in(spec: FieldSpec, q: &BigRational) -> Self {
        match spec {
            FieldSpec::Gaussian => Scalar::Gaussian(GaussianRational::from_rational(q)),
            FieldSpec::Cyclotomic(m) if m > 1 => {
                Scalar::Cyclotomic(Cyclotomic::from_coeffs(&CycloCtx::new(m), vec![q.clone()]))
            }
            FieldSpec::Cyclotomic(_) => Scalar::Cyclotomic(Cyclotomic::from_rational(q)),
            FieldSpec::Float => Scalar::Float(Complex64::from_rational(q)),
        }
    }

    /// Parses in a known field.
    pub fn parse_in(spec: FieldSpec, s: &str) -> Result<Self, CoeffError> {
        Ok(match spec {
            FieldSpec::Gaussian => Scalar::Gaussian(s.parse()?),
            FieldSpec::Float => Scalar::Float(parse_complex(s)?),
            FieldSpec::Cyclotomic(m) => {
                let c: Cyclotomic = s.parse()?;
                let ctx = CycloCtx::new(m);
                if m > 1 {
                    Scalar::Cyclotomic(c.embed(&ctx)?)
                } else {
                    Scalar::Cyclotomic(c)
                }
            }
        })
    }

    fn mismatch(&self, other: &Self) -> CoeffError {
        CoeffError::MixedFields(self.field().to_string(), other.field().to_string())
    }

    fn same_field(&self, other: &Self) -> Result<(), CoeffError> {
        let ok = match (self, other) {
            (Scalar::Gaussian(_), Scalar::Gaussian(_)) | (Scalar::Float(_), Scalar::Float(_)) => true,
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => a.compatible(b),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(other))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a.clone() + b.clone()),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => Scalar::Cyclotomic(a.clone() + b.clone()),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a.clone() * b.clone()),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => Scalar::Cyclotomic(a.clone() * b.clone()),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            _ => unreachable!(),
        })
    }

    pub fn try_inv(&self) -> Result<Self, CoeffError> {
        let r = match self {
            Scalar::Gaussian(a) => a.inv().map(Scalar::Gaussian),
            Scalar::Cyclotomic(a) => a.inv().map(Scalar::Cyclotomic),
            Scalar::Float(a) => Field::inv(a).map(Scalar::Float),
        };
        r.ok_or(CoeffError::DivisionByZero)
    }

    pub fn root_of_unity_order(&self) -> Result<Option<u64>, CoeffError> {
        match self {
            Scalar::Gaussian(a) => a.root_of_unity_order(FLOAT_ORDER_BOUND),
            Scalar::Cyclotomic(a) => a.root_of_unity_order(FLOAT_ORDER_BOUND),
            Scalar::Float(a) => a.root_of_unity_order(FLOAT_ORDER_BOUND),
        }
    }

    /// Image under the canonical embedding into ℚ(ζ_target).
    pub fn embed(&self, target: u64) -> Result<Scalar, CoeffError> {
        if target == 0 {
            return Err(CoeffError::NoEmbedding {
                from: self.field().to_string(),
                to: target,
            });
        }
        let ctx = CycloCtx::new(target);
        match self {
            Scalar::Gaussian(g) => {
                if !target.is_multiple_of(4) {
                    return Err(CoeffError::NoEmbedding {
                        from: "Q(i)".into(),
                        to: target,
                    });
                }
                let i = Cyclotomic::zeta_pow(&ctx, (target / 4) as i64);
                let re = Cyclotomic::from_coeffs(&ctx, vec![g.re.clone()]);
                let im = Cyclotomic::from_rational(&g.im);
                Ok(Scalar::Cyclotomic(re + im * i))
            }
            Scalar::Cyclotomic(c) => Ok(Scalar::Cyclotomic(c.embed(&ctx)?)),
            Scalar::Float(_) => Err(CoeffError::NoEmbedding {
                from: "f64".into(),
                to: target,
            }),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Gaussian(a) => a.to_complex(),
            Scalar::Cyclotomic(a) => a.to_complex(),
            Scalar::Float(a) => *a,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Gaussian(a) => write!(f, "{}", a),
            Scalar::Cyclotomic(a) => write!(f, "{}", a),
            Scalar::Float(a) => write!(f, "{}", complex_text(a)),
        }
    }
}

impl FromStr for Scalar {
    type Err = CoeffError;

    /// Infers the field from the text form.
    fn from_str(s: &str) -> Result<Self, CoeffError> {
        let t = s.trim();
        if t.starts_with("poly(") {
            Ok(Scalar::Cyclotomic(t.parse()?))
        } else if t.ends_with('j') {
            Ok(Scalar::Float(parse_complex(t)?))
        } else {
            Ok(Scalar::Gaussian(t.parse()?))
        }
    }
}
