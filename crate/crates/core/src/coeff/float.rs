use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::rational::rational_to_f64;
use super::{CoeffError, Field, FLOAT_TOL};

/// Shortest round-trip decimal form of an `f64`.
fn float_text(x: f64) -> String {
    let s = format!("{:?}", x);
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

pub(crate) fn complex_text(z: &Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}j", float_text(z.re), float_text(-z.im))
    } else {
        format!("{}+{}j", float_text(z.re), float_text(z.im))
    }
}

/// Parses `a+bj`, `a-bj`, `a` or `bj`, with exponents allowed in `a`, `b`.
pub(crate) fn parse_complex(s: &str) -> Result<Complex64, CoeffError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || CoeffError::Parse(s.to_string());
    let num = |p: &str| -> Result<f64, CoeffError> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.strip_prefix('+').unwrap_or(p).parse::<f64>().map_err(|_| err()),
        }
    };
    match t.strip_suffix('j') {
        None => Ok(Complex64::new(num(&t)?, 0.0)),
        Some(body) => {
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .filter(|&k| {
                    (bytes[k] == b'+' || bytes[k] == b'-')
                        && bytes[k - 1] != b'e'
                        && bytes[k - 1] != b'E'
                })
                .next_back();
            match split {
                Some(k) => Ok(Complex64::new(num(&body[..k])?, num(&body[k..])?)),
                None => Ok(Complex64::new(0.0, num(body)?)),
            }
        }
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn as_rational(&self) -> Option<BigRational> {
        if self.im.abs() > FLOAT_TOL {
            return None;
        }
        BigRational::from_float(self.re)
    }

    fn root_of_unity_order(&self, bound: u64) -> Result<Option<u64>, CoeffError> {
        if self.norm() < FLOAT_TOL {
            return Err(CoeffError::ZeroInput);
        }
        let one = Complex64::new(1.0, 0.0);
        let mut p = one;
        for k in 1..=bound {
            p *= self;
            if !p.re.is_finite() || !p.im.is_finite() {
                return Err(CoeffError::FloatOverflow(k));
            }
            if (p - one).norm() < FLOAT_TOL {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return None;
        }
        Some(self.powf(1.0 / k as f64))
    }

    fn to_text(&self) -> String {
        complex_text(self)
    }

    fn parse_text(s: &str) -> Result<Self, CoeffError> {
        parse_complex(s)
    }

    fn primitive_root(m: u64) -> Option<Self> {
        (m > 0).then(|| Complex64::from_polar(1.0, 2.0 * PI / m as f64))
    }

    fn as_small_int(&self) -> Option<i64> {
        let r = self.re.round();
        ((self.re - r).abs() < FLOAT_TOL && self.im.abs() < FLOAT_TOL && r.abs() < 1e15)
            .then_some(r as i64)
    }
}
