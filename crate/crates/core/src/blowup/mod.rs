//! Point blow-up in the chart `Π(x, t) = (x, x·t₂, …, x·tₙ)` and the
//! one-dimensional normal forms on the exceptional divisor.

mod normal1d;

use thiserror::Error;

use crate::calculus::{CalcError, PForm};
use crate::coeff::Field;
use crate::germdiff::GermError;
use crate::jets::{Jet, JetError};
use crate::logforms::{closedness_residual, LogForm};

pub use normal1d::{centralizer_classify, normal_form_1d, Centralizer, Kind1D, NormalForm1D};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("blow-up needs at least two variables")]
    TooFewVariables,
    #[error("branch {0} vanishes to the effective order")]
    ZeroBranch(usize),
    #[error("the unit must not vanish at the origin")]
    NotUnit,
    #[error("expected a germ in one variable")]
    NotOneVariable,
    #[error("map does not preserve the model form (first mismatch in degree {0})")]
    NotPreserving(usize),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// The chart map as polynomial jets of order `order + 1`, so that pulling
/// back an order-`N` form keeps order `N`.
pub fn chart_map<F: Field>(n: usize, order: usize) -> Vec<Jet<F>> {
    let x = Jet::var(n, order + 1, 0);
    (0..n)
        .map(|i| if i == 0 { x.clone() } else { &x * &Jet::var(n, order + 1, i) })
        .collect()
}

/// `f∘Π = x^k·f̃` with `f̃(0, t) ≢ 0`. The strict transform is exact up to
/// total degree `N − k`.
pub fn strict_transform<F: Field>(f: &Jet<F>) -> Option<(usize, Jet<F>)> {
    let k = f.valuation()?;
    let n = f.n();
    let out = f.order() - k;
    let mut s = Jet::zero(n, out);
    for (e, c) in f.terms() {
        let d: u32 = e.iter().sum();
        let mut img = e.to_vec();
        img[0] = d - k as u32;
        if img.iter().sum::<u32>() as usize <= out {
            s.set_coeff(&img, c.clone());
        }
    }
    Some((k, s))
}

#[derive(Clone, Debug)]
pub struct BlowupResult<F: Field> {
    /// `Π*ω`, or for a logarithmic input `Π*` of its cleared holomorphic form.
    pub pulled: PForm<F>,
    pub multiplicities: Vec<usize>,
    pub stricts: Vec<Jet<F>>,
    /// `α = Σ k_j λ_j`, for logarithmic input.
    pub alpha: Option<F>,
    /// Closedness of the pulled (meromorphic) form.
    pub closed: bool,
    /// For logarithmic input: whether the pulled form equals
    /// `α·dx/x + Σ λ_j df̃_j/f̃_j`.
    pub shape_holds: Option<bool>,
}

pub fn blowup_form<F: Field>(omega: &PForm<F>) -> Result<BlowupResult<F>, BlowupError> {
    if omega.n() < 2 {
        return Err(BlowupError::TooFewVariables);
    }
    let pulled = omega.pullback_by_map(&chart_map(omega.n(), omega.order()))?;
    Ok(BlowupResult {
        closed: pulled.d().is_zero(),
        pulled,
        multiplicities: vec![],
        stricts: vec![],
        alpha: None,
        shape_holds: None,
    })
}

pub fn blowup_logform<F: Field>(l: &LogForm<F>) -> Result<BlowupResult<F>, BlowupError> {
    let n = l.n();
    if n < 2 {
        return Err(BlowupError::TooFewVariables);
    }
    let order = l.order();
    let map = chart_map::<F>(n, order);
    let mut ks = Vec::new();
    let mut stricts = Vec::new();
    for (j, b) in l.branches.iter().enumerate() {
        let (k, s) = strict_transform(&b.f.with_order(order)).ok_or(BlowupError::ZeroBranch(j))?;
        ks.push(k);
        stricts.push(s);
    }
    let alpha = l
        .branches
        .iter()
        .zip(&ks)
        .fold(F::zero(), |acc, (b, &k)| acc + b.lambda.clone() * F::from_i64(k as i64));

    let hol = l.clear_denominators();
    let pulled = hol.pullback_by_map(&map)?;
    let denom = l
        .branches
        .iter()
        .fold(Jet::one(n, order), |acc, b| &acc * &b.f.with_order(order).pow(b.excess + 1));
    let denom = denom.compose(&map)?;
    let closed = closedness_residual(&pulled, &denom).is_zero();

    let shape_holds = if l.is_logarithmic() {
        // Π*(∏f_j · L) = x^{Σk−1}·(α·∏s·dx + x·Σ λ_j ∏_{i≠j}s_i ds_j)
        let w = order + 1;
        let padded: Vec<Jet<F>> = stricts.iter().map(|s| s.with_order(w)).collect();
        let prod = padded.iter().fold(Jet::one(n, w), |acc, s| &acc * s);
        let x = Jet::var(n, w, 0);
        let mut model = PForm::dz(n, w, 0).mul_function(&prod.scale(&alpha));
        for (j, b) in l.branches.iter().enumerate() {
            let others = (0..padded.len())
                .filter(|&i| i != j)
                .fold(x.clone(), |acc, i| &acc * &padded[i]);
            let ds = PForm::function(padded[j].clone()).d();
            model = &model + &ds.mul_function(&others.scale(&b.lambda));
        }
        let total: usize = ks.iter().sum();
        let model = model.mul_function(&x.pow(total.saturating_sub(1) as u32));
        // the bracket is reliable to one degree below the shortest strict
        let e = stricts.iter().map(|s| s.order()).min().unwrap_or(order);
        let cmp = (e + total).saturating_sub(2).min(pulled.order());
        Some(pulled.with_order(cmp).agrees_with(&model.with_order(cmp)))
    } else {
        None
    };

    Ok(BlowupResult {
        pulled,
        multiplicities: ks,
        stricts,
        alpha: Some(alpha),
        closed,
        shape_holds,
    })
}

#[cfg(test)]
mod tests;
