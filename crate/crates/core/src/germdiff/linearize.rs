use crate::calculus::{DiffeoJet, VectorField};
use crate::coeff::{Field, FLOAT_ORDER_BOUND};
use crate::jets::Jet;
use crate::linalg;

use super::GermError;

#[derive(Clone, Debug)]
pub struct Linearization<F: Field> {
    /// `g` with `Dg(0) = I` and `g⁻¹∘φ∘g = ρ·I`.
    pub conjugator: DiffeoJet<F>,
    pub rho: F,
    /// Whether `g⁻¹∘φ∘g − ρI` vanishes to order `N`.
    pub residual_zero: bool,
}

/// The scalar `ρ` when the matrix is `ρ·I`.
pub fn scalar_of<F: Field>(a: &linalg::Mat<F>) -> Option<F> {
    let rho = a.first()?.first()?.clone();
    let scalar = a.iter().enumerate().all(|(i, r)| {
        r.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.approx_eq(&rho) } else { x.is_negligible() })
    });
    scalar.then_some(rho)
}

/// Poincaré linearization of `φ` with `Dφ(0) = ρ·I`, `ρ` not a root of
/// unity: `g_k = E_k/(ρ^k − ρ)` where `E_k` is the degree-`k` part of
/// `φ∘g_{<k}`.
pub fn poincare_linearize<F: Field>(phi: &DiffeoJet<F>) -> Result<Linearization<F>, GermError> {
    let rho = scalar_of(&phi.linear_part()).ok_or(GermError::NotScalar)?;
    if let Some(k) = rho
        .root_of_unity_order(FLOAT_ORDER_BOUND)
        .map_err(|_| GermError::NotScalar)?
    {
        return Err(GermError::RootOfUnity(k));
    }
    let n = phi.n();
    let order = phi.order();
    let mut g = DiffeoJet::identity(n, order);
    for k in 2..=order {
        let composed = phi.compose(&g)?;
        let denom = rho.pow_i(k as i64) - rho.clone();
        if denom.is_negligible() {
            return Err(GermError::Resonance(k));
        }
        let inv = denom.inv().ok_or(GermError::Resonance(k))?;
        let comps: Vec<Jet<F>> = (0..n)
            .map(|i| &g.component(i).clone() + &composed.component(i).homogeneous(k).scale(&inv))
            .collect();
        g = DiffeoJet::new(comps)?;
    }
    let conj = g.inverse()?.compose(phi)?.compose(&g)?;
    let target = DiffeoJet::scalar(n, order, rho.clone())?;
    Ok(Linearization {
        residual_zero: conj.agrees_with(&target),
        conjugator: g,
        rho,
    })
}

/// Solves `v∘S = w·v` with `v(0) = 1` for `S = λ·I`, `λ` a primitive r-th
/// root of unity, given `∏_{j<r} w∘S^j = 1`.
///
/// With `φ̂ = log w`, `θ = (1/r)·Σ_{j<r} j·φ̂∘S^j` satisfies
/// `θ∘S − θ = φ̂` and `v = exp(θ)`.
pub fn solve_twisted_equation<F: Field>(lambda: &F, w: &Jet<F>) -> Result<Jet<F>, GermError> {
    let r = lambda
        .root_of_unity_order(FLOAT_ORDER_BOUND)
        .map_err(|_| GermError::NotRootOfUnity)?
        .ok_or(GermError::NotRootOfUnity)?;
    if !(w.constant_term() - F::one()).is_negligible() {
        return Err(GermError::UnitConstant);
    }
    let mut prod = Jet::one(w.n(), w.order());
    let mut lj = F::one();
    for _ in 0..r {
        prod = &prod * &w.dilate(&lj);
        lj = lj * lambda.clone();
    }
    let one = Jet::one(w.n(), w.order());
    if !prod.agrees_with(&one) {
        let d = (&prod - &one).valuation().unwrap_or(0);
        return Err(GermError::ProductCondition(d));
    }
    let phihat = w.log()?;
    let mut theta = Jet::zero(w.n(), w.order());
    let mut lj = F::one();
    for j in 0..r {
        if j > 0 {
            theta = &theta + &phihat.dilate(&lj).scale(&F::from_i64(j as i64));
        }
        lj = lj * lambda.clone();
    }
    let theta = theta.scale(&F::from_ratio(1, r as i64));
    Ok(theta.exp()?)
}

#[derive(Clone, Debug)]
pub struct GradedSplit<F: Field> {
    /// `Z_i` collects the homogeneous parts of degree `d` with `(d−1) mod r = i`.
    pub parts: Vec<VectorField<F>>,
    /// Indices `i` with `Z_i ≠ 0`.
    pub nonzero: Vec<usize>,
    /// `δ = λ^{n₀−1}` when `S*X = δ·X` holds for `S = λ·I`.
    pub delta: Option<F>,
}

/// Splits `X` by degree modulo `r`. With `λ` given, also tests
/// `S*X = λ^{-1}·X(λz) = δ·X`.
pub fn graded_split<F: Field>(
    x: &VectorField<F>,
    r: usize,
    n0: usize,
    lambda: Option<&F>,
) -> GradedSplit<F> {
    let n = x.n();
    let order = x.order();
    let mut parts: Vec<VectorField<F>> = (0..r).map(|_| VectorField::zero(n, order)).collect();
    for d in 0..=order {
        let h = x.homogeneous(d);
        if h.is_zero() {
            continue;
        }
        let i = (d + r - 1) % r;
        parts[i] = &parts[i] + &h;
    }
    let nonzero = (0..r).filter(|&i| !parts[i].is_zero()).collect();
    let delta = lambda.and_then(|lam| {
        let lam_inv = lam.inv()?;
        let pulled = VectorField::new(
            x.components()
                .iter()
                .map(|c| c.dilate(lam).scale(&lam_inv))
                .collect(),
        )
        .ok()?;
        let delta = lam.pow_i(n0 as i64 - 1);
        pulled.agrees_with(&x.scale(&delta)).then_some(delta)
    });
    GradedSplit {
        parts,
        nonzero,
        delta,
    }
}
