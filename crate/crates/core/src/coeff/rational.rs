use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::{CoeffError, Field};

/// Parses `p`, `-p`, `p/q` with arbitrary precision integers.
pub fn parse_rational(s: &str) -> Result<BigRational, CoeffError> {
    let t = s.trim();
    let err = || CoeffError::Parse(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(CoeffError::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

fn int_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        if k.is_multiple_of(2) {
            return None;
        }
        return int_nth_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if Pow::pow(&r, k) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational `k`-th root if it exists (real branch).
pub fn rational_nth_root(q: &BigRational, k: u32) -> Option<BigRational> {
    if k == 0 {
        return None;
    }
    let n = int_nth_root(q.numer(), k)?;
    let d = int_nth_root(q.denom(), k)?;
    Some(BigRational::new(n, d))
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: scale down by bit length
        let nb = q.numer().bits() as i64;
        let db = q.denom().bits() as i64;
        let shift = (nb - db).clamp(-1000, 1000);
        let sign = if q.is_negative() { -1.0 } else { 1.0 };
        sign * 2f64.powi(shift as i32)
    })
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn root_of_unity_order(&self, _bound: u64) -> Result<Option<u64>, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::ZeroInput);
        }
        if self.is_one() {
            Ok(Some(1))
        } else if *self == -BigRational::one() {
            Ok(Some(2))
        } else {
            Ok(None)
        }
    }

    fn nth_root(&self, k: u32) -> Option<Self> {
        rational_nth_root(self, k)
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn parse_text(s: &str) -> Result<Self, CoeffError> {
        parse_rational(s)
    }

    fn primitive_root(m: u64) -> Option<Self> {
        match m {
            1 => Some(BigRational::one()),
            2 => Some(-BigRational::one()),
            _ => None,
        }
    }
}
