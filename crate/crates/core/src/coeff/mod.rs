//! Coefficient fields.
//!
//! Every algebraic routine in the crate is generic over [`Field`]. Four
//! implementations are provided: plain rationals, Gaussian rationals ℚ(i),
//! cyclotomic fields ℚ(ζ_m) and IEEE complex doubles. The exact ones decide
//! equality exactly; the float one compares with [`FLOAT_TOL`].

mod cyclotomic;
mod float;
mod gaussian;
mod rational;
mod scalar;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CycloCtx, Cyclotomic};
pub use gaussian::GaussianRational;
pub use rational::{parse_rational, rational_nth_root};
pub use scalar::{FieldSpec, Scalar};

/// Absolute tolerance used for every float comparison in the crate.
pub const FLOAT_TOL: f64 = 1e-9;

/// Largest power tried when searching the multiplicative order of a float.
pub const FLOAT_ORDER_BOUND: u64 = 720;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("zero has no multiplicative order")]
    ZeroInput,
    #[error("power ladder overflowed at exponent {0}")]
    FloatOverflow(u64),
    #[error("no canonical embedding of {from} into Q(zeta_{to})")]
    NoEmbedding { from: String, to: u64 },
    #[error("mixed coefficient fields: {0} and {1}")]
    MixedFields(String, String),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// A field of characteristic zero in which jets take their coefficients.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact (equality decidable).
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;

    fn from_i64(k: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(k.into()))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Numerical value (exact for rationals up to rounding).
    fn to_complex(&self) -> Complex64;

    /// The element as a rational number, when it lies in ℚ.
    fn as_rational(&self) -> Option<BigRational>;

    /// Least `k ≤ bound` with `self^k = 1`. Exact fields ignore `bound` and
    /// decide membership in the finite group of roots of unity of the field.
    fn root_of_unity_order(&self, bound: u64) -> Result<Option<u64>, CoeffError>;

    /// Some `k`-th root inside the field, when one is found.
    fn nth_root(&self, k: u32) -> Option<Self>;

    /// Canonical text form (`a+bi`, `poly(m; ...)`, `a+bj`, `p/q`).
    fn to_text(&self) -> String;

    /// Inverse of [`Field::to_text`].
    fn parse_text(s: &str) -> Result<Self, CoeffError>;

    /// A primitive `m`-th root of unity, when the field contains one.
    fn primitive_root(m: u64) -> Option<Self>;

    /// Whether two elements may be combined arithmetically.
    fn compatible(&self, _other: &Self) -> bool {
        true
    }

    /// Zero for exact fields; below [`FLOAT_TOL`] in modulus for floats.
    fn is_negligible(&self) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_complex().norm() < FLOAT_TOL
        }
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_negligible()
    }

    /// Modulus, used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    fn pow_i(&self, e: i64) -> Self {
        if e < 0 {
            let inv = self.inv().expect("negative power of zero");
            return inv.pow_i(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Whether the element is a non-negative integer `k`; returns it.
    fn as_small_int(&self) -> Option<i64> {
        let q = self.as_rational()?;
        if q.is_integer() {
            i64::try_from(q.to_integer()).ok()
        } else {
            None
        }
    }
}

/// Plain free function form of [`Field::root_of_unity_order`] with the
/// default float bound.
pub fn root_of_unity_order<F: Field>(s: &F) -> Result<Option<u64>, CoeffError> {
    s.root_of_unity_order(FLOAT_ORDER_BOUND)
}

#[cfg(test)]
mod tests;
