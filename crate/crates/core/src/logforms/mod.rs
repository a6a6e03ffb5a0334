//! Logarithmic normal forms, integrating factors and isotropy tests.

mod iso;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::calculus::{CalcError, PForm};
use crate::coeff::Field;
use crate::germdiff::GermError;
use crate::jets::Jet;
use crate::linalg;

pub use iso::{
    is_conical,
    fix_test, graded_cofactor, iso_cofactor, residue_action, FixHints, FixResult, FixVerdict,
    Membership, ResidueAction,
};

/// Height bound for rational relations between residues.
pub const RELATION_HEIGHT: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogFormError {
    #[error("branch {0} does not vanish at the origin")]
    BranchNotVanishing(usize),
    #[error("branches live on different spaces")]
    AmbientMismatch,
    #[error("no branch matches the image of branch {0}")]
    BranchMatch(usize),
    #[error("residues are not related by a common constant")]
    InconsistentConstant,
    #[error("map does not preserve the foliation: {0}")]
    NotIso(String),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Germ(#[from] GermError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch<F: Field> {
    pub lambda: F,
    pub f: Jet<F>,
    /// Exponent excess `n_j` of `f_j` in the denominator of the exact part.
    pub excess: u32,
}

/// `Σ λ_j df_j/f_j + d(H/∏ f_j^{n_j})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogForm<F: Field> {
    pub branches: Vec<Branch<F>>,
    pub h: Jet<F>,
}

impl<F: Field> LogForm<F> {
    pub fn new(branches: Vec<Branch<F>>, h: Jet<F>) -> Result<Self, LogFormError> {
        for (j, b) in branches.iter().enumerate() {
            if b.f.n() != h.n() {
                return Err(LogFormError::AmbientMismatch);
            }
            if !b.f.constant_term().is_negligible() {
                return Err(LogFormError::BranchNotVanishing(j));
            }
        }
        Ok(Self { branches, h })
    }

    /// Pure logarithmic form `Σ λ_j df_j/f_j`.
    pub fn logarithmic(terms: Vec<(F, Jet<F>)>) -> Result<Self, LogFormError> {
        let n = terms.first().map(|(_, f)| f.n()).unwrap_or(1);
        let order = terms.iter().map(|(_, f)| f.order()).min().unwrap_or(0);
        let branches = terms
            .into_iter()
            .map(|(lambda, f)| Branch { lambda, f, excess: 0 })
            .collect();
        Self::new(branches, Jet::zero(n, order))
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn order(&self) -> usize {
        self.branches
            .iter()
            .map(|b| b.f.order())
            .fold(self.h.order(), usize::min)
    }

    pub fn is_logarithmic(&self) -> bool {
        self.h.is_zero() && self.branches.iter().all(|b| b.excess == 0)
    }

    pub fn residues(&self) -> Vec<F> {
        self.branches.iter().map(|b| b.lambda.clone()).collect()
    }

    /// The holomorphic form `∏ f_j^{n_j+1} · L`, of order `N−1`:
    /// `Σ λ_j (∏_{i≠j} f_i^{n_i+1}) f_j^{n_j} df_j + F·dH − H·Σ n_j (F/f_j) df_j`
    /// with `F = ∏ f_j`.
    pub fn clear_denominators(&self) -> PForm<F> {
        let n = self.n();
        let order = self.order();
        let out = order.saturating_sub(1);
        let fs: Vec<Jet<F>> = self.branches.iter().map(|b| b.f.with_order(order)).collect();
        let dfs: Vec<PForm<F>> = fs.iter().map(|f| PForm::function(f.clone()).d()).collect();
        let mut w = PForm::zero(n, 1, out);
        for (j, b) in self.branches.iter().enumerate() {
            let mut c = fs[j].pow(b.excess).scale(&b.lambda);
            for (i, bi) in self.branches.iter().enumerate() {
                if i != j {
                    c = &c * &fs[i].pow(bi.excess + 1);
                }
            }
            w = &w + &dfs[j].mul_function(&c);
        }
        if !self.h.is_zero() {
            let h = self.h.with_order(order);
            let big_f = fs.iter().fold(Jet::one(n, order), |acc, f| &acc * f);
            w = &w + &PForm::function(h.clone()).d().mul_function(&big_f);
            for (j, b) in self.branches.iter().enumerate() {
                if b.excess == 0 {
                    continue;
                }
                let others = (0..fs.len())
                    .filter(|&i| i != j)
                    .fold(Jet::one(n, order), |acc, i| &acc * &fs[i]);
                let c = (&h * &others).scale(&F::from_i64(b.excess as i64));
                w = &w - &dfs[j].mul_function(&c);
            }
        }
        w.with_order(out)
    }

    /// First pair `(i, j, q)` with `λ_i = q·λ_j` for a rational `q` of height
    /// at most [`RELATION_HEIGHT`]. Its absence is the checkable stand-in for
    /// "no meromorphic first integral".
    pub fn residue_relation(&self) -> Option<(usize, usize, BigRational)> {
        let ls = self.residues();
        for i in 0..ls.len() {
            for j in i + 1..ls.len() {
                if ls[j].is_negligible() || ls[i].is_negligible() {
                    return Some((i, j, BigRational::zero()));
                }
                let ratio = ls[i].clone() / ls[j].clone();
                if let Some(q) = small_rational(&ratio) {
                    return Some((i, j, q));
                }
            }
        }
        None
    }
}

fn small_rational<F: Field>(x: &F) -> Option<BigRational> {
    let bound = BigInt::from(RELATION_HEIGHT);
    if F::EXACT {
        let q = x.as_rational()?;
        return (q.numer().abs() <= bound && q.denom().abs() <= bound).then_some(q);
    }
    let c = x.to_complex();
    if c.im.abs() > crate::coeff::FLOAT_TOL {
        return None;
    }
    let q = best_rational(c.re, RELATION_HEIGHT)?;
    let back = q.to_f64()?;
    ((back - c.re).abs() < crate::coeff::FLOAT_TOL * (1.0 + c.re.abs())).then_some(q)
}

/// Continued-fraction approximation with denominator at most `max_den`.
fn best_rational(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > max_den as f64 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let p2 = ai.checked_mul(p1)?.checked_add(p0)?;
        let q2 = ai.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (q1 != 0).then(|| BigRational::new(p1.into(), q1.into()))
}

/// Coefficients of `f·dω − df∧ω` as a linear function of `f`, for `f` a
/// monomial, in a fixed listing of the 2-form slots up to `order`.
fn factor_column<F: Field>(omega: &PForm<F>, m: &Jet<F>, order: usize) -> Vec<F> {
    let dw = omega.d();
    let lhs = &dw.mul_function(m) - &PForm::function(m.clone()).d().wedge(omega).expect("same space");
    let lhs = lhs.with_order(order);
    let n = omega.n();
    let basis = crate::jets::Basis::get(n, order);
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = lhs.get(&[a, b]);
            for d in 0..=order {
                out.extend_from_slice(&c.block(d)[..basis.count(d)]);
            }
        }
    }
    out
}

/// Nonzero `f` of degree at most `k_max` with `f·dω = df∧ω` up to the
/// effective order `N−1`, normalised so that its lowest monomial (graded-lex)
/// has coefficient 1.
pub fn integrating_factor_solve<F: Field>(omega: &PForm<F>, k_max: usize) -> Option<Jet<F>> {
    let n = omega.n();
    let order = omega.order();
    let eff = order.saturating_sub(1);
    let val = omega.valuation().unwrap_or(0);
    // monomials of degree above N − val(ω) do not reach the checked range
    let k_max = k_max.min((eff + 1).saturating_sub(val));
    let basis = crate::jets::Basis::get(n, order);
    let monos: Vec<Vec<u32>> = (0..=k_max)
        .flat_map(|d| basis.monomials(d).to_vec())
        .collect();
    let cols: Vec<Vec<F>> = monos
        .iter()
        .map(|e| factor_column(omega, &Jet::monomial(n, order, e, F::one()), eff))
        .collect();
    let rows = cols.first().map_or(0, |c| c.len());
    let a: linalg::Mat<F> = (0..rows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let kernel = if rows == 0 {
        (0..monos.len())
            .map(|i| (0..monos.len()).map(|j| if i == j { F::one() } else { F::zero() }).collect())
            .collect()
    } else {
        linalg::nullspace(&a, monos.len())
    };
    if kernel.is_empty() {
        return None;
    }
    // echelon form over ascending monomials: the first row starts lowest
    let mut k = kernel;
    linalg::rref(&mut k);
    let row = k.into_iter().find(|r| r.iter().any(|x| !x.is_negligible()))?;
    let mut f = Jet::zero(n, order);
    for (e, c) in monos.iter().zip(row) {
        if !c.is_negligible() {
            f.set_coeff(e, c);
        }
    }
    Some(f)
}

/// Residual `f·dω − df∧ω`, zero exactly when `d(ω/f) = 0`.
pub fn closedness_residual<F: Field>(omega: &PForm<F>, f: &Jet<F>) -> PForm<F> {
    let f = f.with_order(omega.order());
    &omega.d().mul_function(&f) - &PForm::function(f).d().wedge(omega).expect("same space")
}

#[cfg(test)]
mod tests;
