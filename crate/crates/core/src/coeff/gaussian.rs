use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{parse_rational, rational_to_f64};
use super::{rational_nth_root, CoeffError, Field};

/// Element `re + im·i` of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sq(&self) -> BigRational {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Self::new(re, im)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inv().expect("division by zero in Q(i)")
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl FromStr for GaussianRational {
    type Err = CoeffError;

    /// Accepts `a+bi`, `a-bi`, a bare rational `a`, or a bare `bi`.
    fn from_str(s: &str) -> Result<Self, CoeffError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || CoeffError::Parse(s.to_string());
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not the leading one
            let split = body
                .char_indices()
                .skip(1)
                .filter(|(_, c)| *c == '+' || *c == '-')
                .map(|(k, _)| k)
                .last();
            let (re, im) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("0", body),
            };
            let im = match im {
                "" | "+" => "1",
                "-" => "-1",
                other => other.strip_prefix('+').unwrap_or(other),
            };
            Ok(Self::new(parse_rational(re)?, parse_rational(im)?))
        } else {
            let re = parse_rational(&t).map_err(|_| err())?;
            Ok(Self::new(re, BigRational::zero()))
        }
    }
}

impl Field for GaussianRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        Self::new(q.clone(), BigRational::zero())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(Self::new(self.re.clone() / n.clone(), -self.im.clone() / n))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn as_rational(&self) -> Option<BigRational> {
        self.im.is_zero().then(|| self.re.clone())
    }

    fn root_of_unity_order(&self, _bound: u64) -> Result<Option<u64>, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::ZeroInput);
        }
        // the roots of unity of Q(i) are ±1, ±i
        let one = BigRational::one();
        let zero = BigRational::zero();
        let ord = if self.re == one && self.im == zero {
            Some(1)
        } else if self.re == -one.clone() && self.im == zero {
            Some(2)
        } else if self.re == zero && (self.im == one || self.im == -one) {
            Some(4)
        } else {
            None
        };
        Ok(ord)
    }

    fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 1 {
            return Some(self.clone());
        }
        if self.im.is_zero() {
            if let Some(r) = rational_nth_root(&self.re, k) {
                return Some(Self::from_rational(&r));
            }
            if k == 2 && self.re.is_negative() {
                let r = rational_nth_root(&-self.re.clone(), 2)?;
                return Some(Self::new(BigRational::zero(), r));
            }
        }
        // multiply by powers of i and retry on the real axis
        let mut unit = Self::one();
        for _ in 0..4 {
            unit = unit * Self::i();
            let w = self.clone() * unit.clone();
            if w.im.is_zero() && !w.re.is_negative() {
                // self = w · unit⁻¹; need a k-th root of unit⁻¹ in Q(i)
                let r = rational_nth_root(&w.re, k)?;
                let target = unit.inv()?;
                for cand in [Self::one(), Self::i(), -Self::one(), -Self::i()] {
                    if cand.pow_i(k as i64) == target {
                        return Some(Self::from_rational(&r) * cand);
                    }
                }
            }
        }
        None
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn parse_text(s: &str) -> Result<Self, CoeffError> {
        s.parse()
    }

    fn primitive_root(m: u64) -> Option<Self> {
        match m {
            1 => Some(Self::one()),
            2 => Some(-Self::one()),
            4 => Some(Self::i()),
            _ => None,
        }
    }
}
