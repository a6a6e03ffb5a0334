//! Flows, logarithms and normal forms of diffeomorphism germs.

mod jordan;
mod linearize;

use thiserror::Error;

use crate::calculus::{CalcError, DiffeoJet, VectorField};
use crate::coeff::Field;
use crate::jets::{Jet, JetError};
use crate::linalg;

pub use jordan::{jordan_decompose, semisimple_part, JordanDecomposition};
pub use linearize::{
    graded_split, poincare_linearize, scalar_of, solve_twisted_equation, GradedSplit,
    Linearization,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("vector field does not vanish at the origin")]
    NonzeroConstant,
    #[error("linear part is not nilpotent; the flow is not polynomial in t")]
    NotNilpotent,
    #[error("linear part is not unipotent")]
    NotUnipotent,
    #[error("linear part is not a scalar matrix")]
    NotScalar,
    #[error("multiplier is a root of unity of order {0}")]
    RootOfUnity(u64),
    #[error("multiplier is not a root of unity")]
    NotRootOfUnity,
    #[error("resonance at degree {0}")]
    Resonance(usize),
    #[error("product of w over the orbit of S is not 1 (first failure in degree {0})")]
    ProductCondition(usize),
    #[error("w(0) must equal 1 for a solution with v(0) = 1")]
    UnitConstant,
    #[error("series did not converge after {0} terms")]
    NotConverged(usize),
    #[error("flows with non-nilpotent linear part are evaluated only over floats")]
    ExactFlowUnsupported,
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// `exp(tX)` as a polynomial in `t`: component `i` is `Σ_k t^k·C[i][k]`.
#[derive(Clone, Debug)]
pub struct PolyFlow<F: Field> {
    coeffs: Vec<Vec<Jet<F>>>,
}

impl<F: Field> PolyFlow<F> {
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn order(&self) -> usize {
        self.coeffs[0][0].order()
    }

    /// Degree in `t`.
    pub fn t_degree(&self) -> usize {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter().enumerate().filter(|(_, j)| !j.is_zero()).map(|(k, _)| k))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients (in increasing powers of `t`) of `P_σ(t)` in component `i`.
    pub fn polynomial(&self, i: usize, sigma: &[u32]) -> Vec<F> {
        self.coeffs[i].iter().map(|c| c.coeff(sigma)).collect()
    }

    /// The `t^k` coefficient jets of component `i`.
    pub fn t_coefficients(&self, i: usize) -> &[Jet<F>] {
        &self.coeffs[i]
    }

    pub fn evaluate(&self, t: &F) -> Result<DiffeoJet<F>, GermError> {
        let comps = self
            .coeffs
            .iter()
            .map(|cs| {
                // Horner in t
                let mut acc = Jet::zero(self.n(), self.order());
                for c in cs.iter().rev() {
                    acc = &acc.scale(t) + c;
                }
                acc
            })
            .collect();
        Ok(DiffeoJet::new(comps)?)
    }

    /// `d/dt` of the flow, as a polynomial family of maps.
    pub fn t_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|cs| {
                let mut d: Vec<Jet<F>> = cs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| c.scale(&F::from_i64(k as i64)))
                    .collect();
                if d.is_empty() {
                    d.push(Jet::zero(cs[0].n(), cs[0].order()));
                }
                d
            })
            .collect();
        Self { coeffs }
    }

    /// Evaluates every component polynomial at `t` without requiring an
    /// invertible result.
    pub fn evaluate_components(&self, t: &F) -> Vec<Jet<F>> {
        self.coeffs
            .iter()
            .map(|cs| {
                let mut acc = Jet::zero(self.n(), self.order());
                for c in cs.iter().rev() {
                    acc = &acc.scale(t) + c;
                }
                acc
            })
            .collect()
    }
}

pub fn is_nilpotent<F: Field>(a: &linalg::Mat<F>) -> bool {
    linalg::is_zero_mat(&linalg::mat_pow(a, a.len() as u32))
}

pub fn is_unipotent<F: Field>(a: &linalg::Mat<F>) -> bool {
    is_nilpotent(&linalg::mat_sub(a, &linalg::identity(a.len())))
}

fn total_dim(n: usize, order: usize) -> usize {
    let b = crate::jets::Basis::get(n, order);
    (0..=order).map(|d| b.count(d)).sum()
}

/// Lie series `exp(tX)(z) = Σ t^k X^k(z)/k!` for `X(0) = 0` with nilpotent
/// linear part, where the sum is finite.
pub fn formal_flow<F: Field>(x: &VectorField<F>) -> Result<PolyFlow<F>, GermError> {
    if !x.is_singular() {
        return Err(GermError::NonzeroConstant);
    }
    if !is_nilpotent(&x.linear_part()) {
        return Err(GermError::NotNilpotent);
    }
    let n = x.n();
    let order = x.order();
    let cap = n * total_dim(n, order) + 2;
    let coeffs = (0..n)
        .map(|i| {
            let mut out = Vec::new();
            let mut cur = Jet::var(n, order, i);
            let mut fact = F::one();
            for k in 0..cap {
                if cur.is_zero() {
                    break;
                }
                if k > 0 {
                    fact = fact * F::from_i64(k as i64);
                }
                out.push(cur.scale(&fact.inv().expect("k! is nonzero")));
                cur = x.apply(&cur);
            }
            if out.is_empty() {
                out.push(Jet::zero(n, order));
            }
            out
        })
        .collect();
    Ok(PolyFlow { coeffs })
}

/// `exp(tX)` at a given `t` for any `X(0) = 0`. Over exact fields this is
/// only possible when the Lie series terminates.
pub fn flow_at<F: Field>(x: &VectorField<F>, t: &F) -> Result<DiffeoJet<F>, GermError> {
    match formal_flow(x) {
        Ok(pf) => return pf.evaluate(t),
        Err(GermError::NotNilpotent) => {}
        Err(e) => return Err(e),
    }
    if F::EXACT {
        return Err(GermError::ExactFlowUnsupported);
    }
    let n = x.n();
    let order = x.order();
    let max_terms = 400;
    let comps = (0..n)
        .map(|i| {
            let mut acc = Jet::zero(n, order);
            let mut term = Jet::var(n, order, i);
            for k in 1..=max_terms {
                acc = &acc + &term;
                term = x.apply(&term).scale(&(t.clone() / F::from_i64(k as i64)));
                if term.max_abs() < 1e-18 * acc.max_abs().max(1.0) {
                    return Ok(acc);
                }
            }
            Err(GermError::NotConverged(max_terms))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DiffeoJet::new(comps)?)
}

/// Infinitesimal generator of a unipotent germ: `X_i = log(φ*)(z_i)` with
/// `log(φ*) = Σ (−1)^{k+1} D^k/k`, `D(f) = f∘φ − f`.
pub fn diffeo_log<F: Field>(phi: &DiffeoJet<F>) -> Result<VectorField<F>, GermError> {
    if !is_unipotent(&phi.linear_part()) {
        return Err(GermError::NotUnipotent);
    }
    let n = phi.n();
    let order = phi.order();
    let cap = n * total_dim(n, order) + 2;
    let comps = (0..n)
        .map(|i| {
            let mut acc = Jet::zero(n, order);
            let mut cur = Jet::var(n, order, i);
            for k in 1..=cap {
                cur = &phi.apply_to(&cur)? - &cur;
                if cur.is_zero() {
                    return Ok(acc);
                }
                let c = F::from_ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64);
                acc = &acc + &cur.scale(&c);
            }
            Err(GermError::NotConverged(cap))
        })
        .collect::<Result<Vec<_>, GermError>>()?;
    Ok(VectorField::new(comps)?)
}
