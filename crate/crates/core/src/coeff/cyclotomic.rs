use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::{parse_rational, rational_to_f64};
use super::{rational_nth_root, CoeffError, Field};

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()));
    q
}

fn cyclotomic_memo(m: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d of m
    let mut p = vec![BigInt::zero(); m as usize + 1];
    p[0] = -BigInt::one();
    p[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let pd = cyclotomic_memo(d, memo);
            p = poly_div_exact(&p, &pd);
        }
    }
    memo.insert(m, p.clone());
    p
}

/// Integer coefficients (constant term first) of the m-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic index must be positive");
    cyclotomic_memo(m, &mut HashMap::new())
}

/// Arithmetic context of ℚ(ζ_m): the reduction modulus Φ_m.
#[derive(Debug)]
pub struct CycloCtx {
    m: u64,
    modulus: Vec<BigRational>,
}

impl CycloCtx {
    pub fn new(m: u64) -> Arc<Self> {
        let modulus = cyclotomic_polynomial(m)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        Arc::new(Self { m, modulus })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// φ(m), the dimension over ℚ.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut p: Vec<BigRational>) -> Vec<BigRational> {
        let deg = self.degree();
        for i in (deg..p.len()).rev() {
            let c = std::mem::take(&mut p[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..deg {
                let t = c.clone() * self.modulus[j].clone();
                p[i - deg + j] -= t;
            }
        }
        p.resize(deg, BigRational::zero());
        p
    }
}

/// Element of ℚ(ζ_m) in the power basis 1, ζ, …, ζ^{φ(m)−1}.
///
/// Elements built by [`Zero::zero`], [`One::one`] or
/// [`Field::from_rational`] carry no context: they are rational constants and
/// combine with any cyclotomic field. Combining two different `m` panics.
#[derive(Clone)]
pub struct Cyclotomic {
    ctx: Option<Arc<CycloCtx>>,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn from_coeffs(ctx: &Arc<CycloCtx>, coeffs: Vec<BigRational>) -> Self {
        Self {
            ctx: Some(ctx.clone()),
            coeffs: ctx.reduce(coeffs),
        }
    }

    pub fn constant(q: BigRational) -> Self {
        Self {
            ctx: None,
            coeffs: vec![q],
        }
    }

    /// ζ_m^k for any integer k.
    pub fn zeta_pow(ctx: &Arc<CycloCtx>, k: i64) -> Self {
        let m = ctx.m as i64;
        let e = k.rem_euclid(m) as usize;
        let mut p = vec![BigRational::zero(); e + 1];
        p[e] = BigRational::one();
        Self::from_coeffs(ctx, p)
    }

    pub fn zeta(ctx: &Arc<CycloCtx>) -> Self {
        Self::zeta_pow(ctx, 1)
    }

    /// The cyclotomic index m, or `None` for a context-free rational constant.
    pub fn modulus_index(&self) -> Option<u64> {
        self.ctx.as_ref().map(|c| c.m)
    }

    pub fn ctx(&self) -> Option<&Arc<CycloCtx>> {
        self.ctx.as_ref()
    }

    /// Coordinates in the power basis (a single entry for constants).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn join(a: &Self, b: &Self) -> Option<Arc<CycloCtx>> {
        match (&a.ctx, &b.ctx) {
            (Some(x), Some(y)) => {
                assert!(
                    x.m == y.m,
                    "mixed cyclotomic fields Q(zeta_{}) and Q(zeta_{})",
                    x.m,
                    y.m
                );
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    fn lifted(&self, ctx: &Arc<CycloCtx>) -> Vec<BigRational> {
        match &self.ctx {
            Some(_) => self.coeffs.clone(),
            None => {
                let mut v = vec![BigRational::zero(); ctx.degree()];
                v[0] = self.coeffs[0].clone();
                v
            }
        }
    }

    /// Image under the canonical embedding ℚ(ζ_m) ⊂ ℚ(ζ_target).
    pub fn embed(&self, target: &Arc<CycloCtx>) -> Result<Self, CoeffError> {
        match &self.ctx {
            None => Ok(Self::from_coeffs(target, self.coeffs.clone())),
            Some(src) => {
                if !target.m.is_multiple_of(src.m) {
                    return Err(CoeffError::NoEmbedding {
                        from: format!("Q(zeta_{})", src.m),
                        to: target.m,
                    });
                }
                let step = (target.m / src.m) as usize;
                let mut p = vec![BigRational::zero(); step * self.coeffs.len().max(1)];
                for (k, c) in self.coeffs.iter().enumerate() {
                    p[k * step] = c.clone();
                }
                Ok(Self::from_coeffs(target, p))
            }
        }
    }

    fn is_rational_constant(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        match (&self.ctx, &other.ctx) {
            (Some(x), Some(y)) => x.m == y.m && self.coeffs == other.coeffs,
            _ => {
                if self.is_rational_constant() && other.is_rational_constant() {
                    self.coeffs[0] == other.coeffs[0]
                } else {
                    false
                }
            }
        }
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Self::constant(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl Add for Cyclotomic {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        match Self::join(&self, &o) {
            None => Self::constant(self.coeffs[0].clone() + o.coeffs[0].clone()),
            Some(ctx) => {
                let a = self.lifted(&ctx);
                let b = o.lifted(&ctx);
                let coeffs = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
                Self {
                    ctx: Some(ctx),
                    coeffs,
                }
            }
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            ctx: self.ctx,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let ctx = match Self::join(&self, &o) {
            None => return Self::constant(self.coeffs[0].clone() * o.coeffs[0].clone()),
            Some(ctx) => ctx,
        };
        if self.ctx.is_none() {
            let s = self.coeffs[0].clone();
            return Self {
                ctx: Some(ctx),
                coeffs: o.coeffs.into_iter().map(|c| c * s.clone()).collect(),
            };
        }
        if o.ctx.is_none() {
            let s = o.coeffs[0].clone();
            return Self {
                ctx: Some(ctx),
                coeffs: self.coeffs.into_iter().map(|c| c * s.clone()).collect(),
            };
        }
        let n = self.coeffs.len();
        let mut p = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    p[i + j] += a.clone() * b.clone();
                }
            }
        }
        Self {
            coeffs: ctx.reduce(p),
            ctx: Some(ctx),
        }
    }
}

impl Div for Cyclotomic {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inv().expect("division by zero in cyclotomic field")
    }
}

/// Solves the dense rational system `a·x = b` (square, nonsingular).
fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() * inv.clone();
            for c in col..n {
                let t = f.clone() * a[col][c].clone();
                a[r][c] -= t;
            }
            let t = f * b[col].clone();
            b[r] -= t;
        }
    }
    Some((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // rational constants print the same with or without a context
        if self.is_rational_constant() {
            let c = self.coeffs.first().cloned().unwrap_or_else(BigRational::zero);
            return write!(f, "poly(1; {})", c);
        }
        let m = self.ctx.as_ref().map(|c| c.m).unwrap_or(1);
        let body: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "poly({}; {})", m, body.join(","))
    }
}

impl FromStr for Cyclotomic {
    type Err = CoeffError;

    /// Parses `poly(m; c0,c1,...)`.
    fn from_str(s: &str) -> Result<Self, CoeffError> {
        let err = || CoeffError::Parse(s.to_string());
        let t = s.trim();
        let inner = t
            .strip_prefix("poly(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let (m, rest) = inner.split_once(';').ok_or_else(err)?;
        let m: u64 = m.trim().parse().map_err(|_| err())?;
        if m == 0 {
            return Err(err());
        }
        let coeffs = rest
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            return Err(err());
        }
        if m == 1 {
            let sum = coeffs.into_iter().fold(BigRational::zero(), |a, b| a + b);
            return Ok(Self::constant(sum));
        }
        Ok(Self::from_coeffs(&CycloCtx::new(m), coeffs))
    }
}

impl Field for Cyclotomic {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        Self::constant(q.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let ctx = match &self.ctx {
            None => return Some(Self::constant(self.coeffs[0].recip())),
            Some(c) => c.clone(),
        };
        let n = ctx.degree();
        // column j of the multiplication matrix is self·ζ^j
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        let z = Self::zeta(&ctx);
        for _ in 0..n {
            cols.push(cur.coeffs.clone());
            cur = cur * z.clone();
        }
        let a: Vec<Vec<BigRational>> = (0..n)
            .map(|r| (0..n).map(|c| cols[c][r].clone()).collect())
            .collect();
        let mut e0 = vec![BigRational::zero(); n];
        e0[0] = BigRational::one();
        let x = solve_rational(a, e0)?;
        Some(Self {
            ctx: Some(ctx),
            coeffs: x,
        })
    }

    fn to_complex(&self) -> Complex64 {
        let m = self.ctx.as_ref().map(|c| c.m).unwrap_or(1) as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| Complex64::from_polar(rational_to_f64(c), 2.0 * PI * k as f64 / m))
            .sum()
    }

    fn as_rational(&self) -> Option<BigRational> {
        self.is_rational_constant().then(|| self.coeffs[0].clone())
    }

    fn root_of_unity_order(&self, _bound: u64) -> Result<Option<u64>, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::ZeroInput);
        }
        let ctx = match &self.ctx {
            None => {
                let c = &self.coeffs[0];
                return Ok(if c.is_one() {
                    Some(1)
                } else if *c == -BigRational::one() {
                    Some(2)
                } else {
                    None
                });
            }
            Some(c) => c.clone(),
        };
        // roots of unity of Q(ζ_m) are exactly ±ζ_m^j
        let m = ctx.m;
        let neg = -self.clone();
        let z = Self::zeta(&ctx);
        let mut cur = Self::one();
        for j in 0..m {
            if cur == *self {
                return Ok(Some(m / j.gcd(&m)));
            }
            if cur == neg {
                let two_m = 2 * m;
                let e = m + 2 * j;
                return Ok(Some(two_m / e.gcd(&two_m)));
            }
            cur = cur * z.clone();
        }
        Ok(None)
    }

    fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 1 {
            return Some(self.clone());
        }
        if let Some(q) = self.as_rational() {
            if let Some(r) = rational_nth_root(&q, k) {
                return Some(match &self.ctx {
                    Some(ctx) => Self::from_coeffs(ctx, vec![r]),
                    None => Self::constant(r),
                });
            }
        }
        // roots of unity: ζ^j has the root ζ^{j/k} when k is invertible mod m
        if let (Some(ctx), Ok(Some(_))) = (&self.ctx, self.root_of_unity_order(0)) {
            let m = ctx.m as i64;
            for e in 0..2 * m {
                let cand = if e < m {
                    Self::zeta_pow(ctx, e)
                } else {
                    -Self::zeta_pow(ctx, e - m)
                };
                if cand.pow_i(k as i64) == *self {
                    return Some(cand);
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
            0 => None,
            1 => Some(Self::one()),
            _ => Some(Self::zeta(&CycloCtx::new(m))),
        }
    }

    fn compatible(&self, other: &Self) -> bool {
        match (&self.ctx, &other.ctx) {
            (Some(x), Some(y)) => x.m == y.m,
            _ => true,
        }
    }
}
