//! Truncated multivariate power series.
//!
//! A [`Jet`] stores the Taylor coefficients of a series in `n` variables up
//! to total degree `N`, bucketed by degree. Coefficients within a degree are
//! laid out in the graded-lex order of the shared [`Basis`].

mod basis;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::coeff::Field;

pub use basis::Basis;
use basis::NONE;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("substituted component {0} has a nonzero constant term")]
    NonzeroConstant(usize),
    #[error("expected {expected} variables, got {got}")]
    VariableMismatch { expected: usize, got: usize },
    #[error("constant term is zero, the jet is not a unit")]
    NotUnit,
    #[error("constant term must be {0}")]
    BadConstant(&'static str),
    #[error("no {0}-th root of the constant term in the coefficient field")]
    NoRoot(u32),
}

/// Default variable names: `x, y, z` up to three variables, else `z1..zn`.
pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("z{}", i)).collect()
    }
}

#[derive(Clone)]
pub struct Jet<F: Field> {
    basis: Arc<Basis>,
    coeffs: Vec<Vec<F>>,
    mixed_order: bool,
}

impl<F: Field> Jet<F> {
    pub fn zero(n: usize, order: usize) -> Self {
        let basis = Basis::get(n, order);
        let coeffs = (0..=order).map(|d| vec![F::zero(); basis.count(d)]).collect();
        Self {
            basis,
            coeffs,
            mixed_order: false,
        }
    }

    pub fn constant(n: usize, order: usize, c: F) -> Self {
        let mut j = Self::zero(n, order);
        j.coeffs[0][0] = c;
        j
    }

    pub fn one(n: usize, order: usize) -> Self {
        Self::constant(n, order, F::one())
    }

    /// The coordinate function `z_i`.
    pub fn var(n: usize, order: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(n, order, &e, F::one())
    }

    /// `c·z^exp`, or zero when `|exp| > order`.
    pub fn monomial(n: usize, order: usize, exp: &[u32], c: F) -> Self {
        let mut j = Self::zero(n, order);
        j.set_coeff(exp, c);
        j
    }

    pub fn from_terms<'a, I>(n: usize, order: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a [u32], F)>,
    {
        let mut j = Self::zero(n, order);
        for (e, c) in terms {
            if let Some((d, k)) = j.basis.locate(e) {
                j.coeffs[d][k] = j.coeffs[d][k].clone() + c;
            }
        }
        j
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    /// Set when an operation combined jets of different truncation order.
    pub fn mixed_order(&self) -> bool {
        self.mixed_order
    }

    pub fn clear_mixed_order(&mut self) {
        self.mixed_order = false;
    }

    pub fn coeff(&self, exp: &[u32]) -> F {
        match self.basis.locate(exp) {
            Some((d, k)) => self.coeffs[d][k].clone(),
            None => F::zero(),
        }
    }

    pub fn set_coeff(&mut self, exp: &[u32], c: F) {
        if let Some((d, k)) = self.basis.locate(exp) {
            self.coeffs[d][k] = c;
        }
    }

    pub fn constant_term(&self) -> F {
        self.coeffs[0][0].clone()
    }

    /// Coefficients of degree `d` in basis order.
    pub fn block(&self, d: usize) -> &[F] {
        &self.coeffs[d]
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn block_mut(&mut self, d: usize) -> &mut Vec<F> {
        &mut self.coeffs[d]
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &F)> + '_ {
        self.coeffs.iter().enumerate().flat_map(move |(d, block)| {
            block
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_negligible())
                .map(move |(k, c)| (self.basis.monomials(d)[k].as_slice(), c))
        })
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|b| b.iter().all(|c| c.is_negligible()))
    }

    pub fn is_block_zero(&self, d: usize) -> bool {
        self.coeffs[d].iter().all(|c| c.is_negligible())
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        (0..=self.order()).find(|&d| !self.is_block_zero(d))
    }

    /// Highest degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        (0..=self.order()).rev().find(|&d| !self.is_block_zero(d))
    }

    /// Homogeneous part of degree `d`.
    pub fn homogeneous(&self, d: usize) -> Self {
        let mut j = Self::zero(self.n(), self.order());
        if d <= self.order() {
            j.coeffs[d] = self.coeffs[d].clone();
        }
        j.mixed_order = self.mixed_order;
        j
    }

    /// Parts of degree in `lo..=hi`.
    pub fn degree_range(&self, lo: usize, hi: usize) -> Self {
        let mut j = Self::zero(self.n(), self.order());
        for d in lo..=hi.min(self.order()) {
            j.coeffs[d] = self.coeffs[d].clone();
        }
        j.mixed_order = self.mixed_order;
        j
    }

    /// Changes the truncation order. Lowering drops degrees; raising pads
    /// with zeros, which is only meaningful for polynomial data.
    pub fn with_order(&self, order: usize) -> Self {
        let mut j = Self::zero(self.n(), order);
        for d in 0..=order.min(self.order()) {
            j.coeffs[d] = self.coeffs[d].clone();
        }
        j.mixed_order = self.mixed_order;
        j
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Jet<G> {
        Jet {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|b| b.iter().map(&f).collect())
                .collect(),
            mixed_order: self.mixed_order,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut j = self.clone();
        for b in &mut j.coeffs {
            for x in b.iter_mut() {
                if !x.is_zero() {
                    *x = x.clone() * c.clone();
                }
            }
        }
        j
    }

    /// `f(c·z)`: the degree-`d` block scaled by `c^d`.
    pub fn dilate(&self, c: &F) -> Self {
        let mut j = self.clone();
        let mut p = F::one();
        for d in 0..=self.order() {
            if d > 0 {
                p = p * c.clone();
            }
            for x in j.coeffs[d].iter_mut() {
                if !x.is_zero() {
                    *x = x.clone() * p.clone();
                }
            }
        }
        j
    }

    /// Equality up to the smaller of the two orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let n = self.order().min(other.order());
        self.n() == other.n()
            && (0..=n).all(|d| {
                self.coeffs[d]
                    .iter()
                    .zip(&other.coeffs[d])
                    .all(|(a, b)| a.approx_eq(b))
            })
    }

    /// Largest modulus of a coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|b| b.iter())
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    fn aligned(&self, other: &Self) -> (usize, bool) {
        assert_eq!(self.n(), other.n(), "jets in different numbers of variables");
        let mixed = self.mixed_order || other.mixed_order || self.order() != other.order();
        (self.order().min(other.order()), mixed)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(F, F) -> F) -> Self {
        let (order, mixed) = self.aligned(other);
        let mut j = Self::zero(self.n(), order);
        for d in 0..=order {
            for (k, slot) in j.coeffs[d].iter_mut().enumerate() {
                *slot = op(self.coeffs[d][k].clone(), other.coeffs[d][k].clone());
            }
        }
        j.mixed_order = mixed;
        j
    }

    /// Adds the product of block `a` (degree `da`) and block `b` (degree `db`)
    /// into `out`, which must be the block of degree `da + db`.
    fn mul_blocks_into(basis: &Basis, a: &[F], da: usize, b: &[F], db: usize, out: &mut [F]) {
        if a.iter().all(|x| x.is_zero()) || b.iter().all(|x| x.is_zero()) {
            return;
        }
        let table = basis.product_table(da, db);
        let nb = b.len();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let row = &table[i * nb..(i + 1) * nb];
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = row[j] as usize;
                out[t] = out[t].clone() + x.clone() * y.clone();
            }
        }
    }

    pub fn mul_jet(&self, other: &Self) -> Self {
        let (order, mixed) = self.aligned(other);
        let mut j = Self::zero(self.n(), order);
        let basis = j.basis.clone();
        for d1 in 0..=order {
            for d2 in 0..=(order - d1) {
                Self::mul_blocks_into(
                    &basis,
                    &self.coeffs[d1],
                    d1,
                    &other.coeffs[d2],
                    d2,
                    &mut j.coeffs[d1 + d2],
                );
            }
        }
        j.mixed_order = mixed;
        j
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n(), self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_jet(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_jet(&base);
            }
        }
        acc.mixed_order |= self.mixed_order;
        acc
    }

    /// `∂/∂z_i`; the result is reliable only to order `N−1` and carries it.
    pub fn derivative(&self, i: usize) -> Self {
        let order = self.order().saturating_sub(1);
        let mut j = self.partial_padded(i).with_order(order);
        j.mixed_order = self.mixed_order;
        j
    }

    /// `∂/∂z_i` kept at order `N`, the top degree being zero-padded.
    pub(crate) fn partial_padded(&self, i: usize) -> Self {
        let mut j = Self::zero(self.n(), self.order());
        for d in 1..=self.order() {
            let table = self.basis.deriv_table(i, d);
            let exps = self.basis.monomials(d);
            for (k, c) in self.coeffs[d].iter().enumerate() {
                let t = table[k];
                if t == NONE || c.is_zero() {
                    continue;
                }
                j.coeffs[d - 1][t as usize] = c.clone() * F::from_i64(exps[k][i] as i64);
            }
        }
        j.mixed_order = self.mixed_order;
        j
    }

    /// `Σ X_i ∂f/∂z_i`. When every `X_i(0) = 0` the order is kept at `N`,
    /// otherwise it drops to `N−1`.
    pub fn derivation(&self, x: &[Self]) -> Self {
        assert_eq!(x.len(), self.n(), "derivation needs one component per variable");
        let singular = x.iter().all(|c| c.constant_term().is_negligible());
        let mut acc = Self::zero(self.n(), self.order());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            acc = &acc + &xi.mul_jet(&self.partial_padded(i));
        }
        if singular {
            acc
        } else {
            acc.with_order(self.order().saturating_sub(1))
        }
    }

    /// Substitutes `z_i ↦ map[i]`. Each component must have zero constant
    /// term; the result lives in the variables of the components.
    pub fn compose(&self, map: &[Self]) -> Result<Self, JetError> {
        if map.len() != self.n() {
            return Err(JetError::VariableMismatch {
                expected: self.n(),
                got: map.len(),
            });
        }
        if let Some(i) = map.iter().position(|m| !m.constant_term().is_negligible()) {
            return Err(JetError::NonzeroConstant(i));
        }
        let k = map.first().map_or(0, |m| m.n());
        if let Some(m) = map.iter().find(|m| m.n() != k) {
            return Err(JetError::VariableMismatch {
                expected: k,
                got: m.n(),
            });
        }
        let mut order = self.order();
        let mut mixed = self.mixed_order;
        for m in map {
            mixed |= m.mixed_order || m.order() != order;
            order = order.min(m.order());
        }
        if self.n() == 0 {
            return Ok(Self::constant(0, order, self.constant_term()));
        }
        let map: Vec<Self> = map.iter().map(|m| m.with_order(order)).collect();
        let mut result = Self::constant(k, order, self.constant_term());
        // memoised monomial images, built from one lower monomial
        let mut memo: HashMap<Vec<u32>, Self> = HashMap::new();
        let one = Self::one(k, order);
        memo.insert(vec![0; self.n()], one);
        for d in 1..=order {
            for (idx, e) in self.basis.monomials(d).iter().enumerate() {
                let c = &self.coeffs[d][idx];
                let needed = !c.is_zero() || d < order;
                if !needed {
                    continue;
                }
                let last = e.iter().rposition(|&v| v > 0).expect("degree ≥ 1");
                let mut prev = e.clone();
                prev[last] -= 1;
                let img = match memo.get(&prev) {
                    Some(p) => p.mul_jet(&map[last]),
                    None => continue,
                };
                if !c.is_zero() {
                    result = &result + &img.scale(c);
                }
                memo.insert(e.clone(), img);
            }
            // only degree-d images serve as prefixes from now on
            memo.retain(|e, _| e.iter().sum::<u32>() as usize >= d);
        }
        result.mixed_order = mixed;
        Ok(result)
    }

    /// Multiplicative inverse of a unit, order by order.
    pub fn unit_inverse(&self) -> Result<Self, JetError> {
        let c0 = self.constant_term();
        let inv0 = c0.inv().filter(|_| !c0.is_negligible()).ok_or(JetError::NotUnit)?;
        let order = self.order();
        let mut v = Self::constant(self.n(), order, inv0.clone());
        let basis = v.basis.clone();
        for d in 1..=order {
            let mut acc = vec![F::zero(); basis.count(d)];
            for k in 1..=d {
                Self::mul_blocks_into(&basis, &self.coeffs[k], k, &v.coeffs[d - k], d - k, &mut acc);
            }
            v.coeffs[d] = acc.into_iter().map(|a| -(a * inv0.clone())).collect();
        }
        v.mixed_order = self.mixed_order;
        Ok(v)
    }

    /// `exp(f)` for `f(0) = 0`, via the Euler-operator recursion
    /// `d·e_d = Σ_k k·f_k·e_{d−k}`.
    pub fn exp(&self) -> Result<Self, JetError> {
        if !self.constant_term().is_negligible() {
            return Err(JetError::BadConstant("0"));
        }
        let order = self.order();
        let mut e = Self::one(self.n(), order);
        let basis = e.basis.clone();
        for d in 1..=order {
            let mut acc = vec![F::zero(); basis.count(d)];
            for k in 1..=d {
                let fk: Vec<F> = self.coeffs[k]
                    .iter()
                    .map(|c| c.clone() * F::from_i64(k as i64))
                    .collect();
                Self::mul_blocks_into(&basis, &fk, k, &e.coeffs[d - k], d - k, &mut acc);
            }
            let inv_d = F::from_ratio(1, d as i64);
            e.coeffs[d] = acc.into_iter().map(|a| a * inv_d.clone()).collect();
        }
        e.mixed_order = self.mixed_order;
        Ok(e)
    }

    /// `log(u)` for `u(0) = 1`, via `d·L_d = d·u_d − Σ_{k<d} (d−k)·u_k·L_{d−k}`.
    pub fn log(&self) -> Result<Self, JetError> {
        if !(self.constant_term() - F::one()).is_negligible() {
            return Err(JetError::BadConstant("1"));
        }
        let order = self.order();
        let mut l = Self::zero(self.n(), order);
        let basis = l.basis.clone();
        for d in 1..=order {
            let mut acc = vec![F::zero(); basis.count(d)];
            for k in 1..d {
                let lk: Vec<F> = l.coeffs[d - k]
                    .iter()
                    .map(|c| c.clone() * F::from_i64((d - k) as i64))
                    .collect();
                Self::mul_blocks_into(&basis, &self.coeffs[k], k, &lk, d - k, &mut acc);
            }
            let inv_d = F::from_ratio(1, d as i64);
            l.coeffs[d] = self.coeffs[d]
                .iter()
                .zip(acc)
                .map(|(u, a)| u.clone() - a * inv_d.clone())
                .collect();
        }
        l.mixed_order = self.mixed_order;
        Ok(l)
    }

    /// Some `k`-th root of a unit: a root `c` of the constant term times
    /// `exp(log(u/u(0))/k)`.
    pub fn root(&self, k: u32) -> Result<Self, JetError> {
        let c0 = self.constant_term();
        if c0.is_negligible() {
            return Err(JetError::NotUnit);
        }
        let c = c0.nth_root(k).ok_or(JetError::NoRoot(k))?;
        let normalized = self.scale(&c0.inv().ok_or(JetError::NotUnit)?);
        let l = normalized.log()?.scale(&F::from_ratio(1, k as i64));
        Ok(l.exp()?.scale(&c))
    }

    /// Value at a point, summing all stored terms.
    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.n());
        let mut s = F::zero();
        for (e, c) in self.terms() {
            let mut t = c.clone();
            for (x, &p) in point.iter().zip(e) {
                if p > 0 {
                    t = t * x.pow_i(p as i64);
                }
            }
            s = s + t;
        }
        s
    }

    /// Text form with the given variable names, e.g. `3/2*x^2*y + (0+1i)*z`.
    pub fn to_text_with(&self, vars: &[String]) -> String {
        let mut out = String::new();
        for (e, c) in self.terms() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    if p == 1 {
                        vars[i].clone()
                    } else {
                        format!("{}^{}", vars[i], p)
                    }
                })
                .collect();
            let (neg, coef) = coefficient_text(c);
            let body = match (coef.as_str(), mono.is_empty()) {
                (_, true) => coef,
                ("1", false) => mono.join("*"),
                (_, false) => format!("{}*{}", coef, mono.join("*")),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Sign and magnitude text of a coefficient; non-rational values are
/// parenthesised.
fn coefficient_text<F: Field>(c: &F) -> (bool, String) {
    if F::EXACT {
        if let Some(q) = c.as_rational() {
            let neg = q < num_rational::BigRational::from_integer(0.into());
            let abs = if neg { -q } else { q };
            return (neg, abs.to_string());
        }
    }
    (false, format!("({})", c.to_text()))
}

impl<F: Field> fmt::Debug for Jet<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Jet[n={}, N={}]({})",
            self.n(),
            self.order(),
            self.to_text_with(&default_var_names(self.n()))
        )
    }
}

impl<F: Field> fmt::Display for Jet<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text_with(&default_var_names(self.n())))
    }
}

impl<F: Field> PartialEq for Jet<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.order() == other.order() && self.agrees_with(other)
    }
}

impl<F: Field> Add for &Jet<F> {
    type Output = Jet<F>;
    fn add(self, o: &Jet<F>) -> Jet<F> {
        self.zip_with(o, |a, b| a + b)
    }
}

impl<F: Field> Sub for &Jet<F> {
    type Output = Jet<F>;
    fn sub(self, o: &Jet<F>) -> Jet<F> {
        self.zip_with(o, |a, b| a - b)
    }
}

impl<F: Field> Mul for &Jet<F> {
    type Output = Jet<F>;
    fn mul(self, o: &Jet<F>) -> Jet<F> {
        self.mul_jet(o)
    }
}

impl<F: Field> Neg for &Jet<F> {
    type Output = Jet<F>;
    fn neg(self) -> Jet<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> Add for Jet<F> {
    type Output = Jet<F>;
    fn add(self, o: Jet<F>) -> Jet<F> {
        &self + &o
    }
}

impl<F: Field> Sub for Jet<F> {
    type Output = Jet<F>;
    fn sub(self, o: Jet<F>) -> Jet<F> {
        &self - &o
    }
}

impl<F: Field> Mul for Jet<F> {
    type Output = Jet<F>;
    fn mul(self, o: Jet<F>) -> Jet<F> {
        self.mul_jet(&o)
    }
}

impl<F: Field> Neg for Jet<F> {
    type Output = Jet<F>;
    fn neg(self) -> Jet<F> {
        -&self
    }
}

#[cfg(test)]
mod tests;
