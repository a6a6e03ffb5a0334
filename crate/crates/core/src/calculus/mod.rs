//! Exterior calculus over jets: forms, vector fields and diffeomorphisms.
//!
//! Differentiation lowers the reliable truncation order by one, and every
//! result carries its own effective order.

mod diffeo;
mod field;
mod form;

use thiserror::Error;

use crate::coeff::Field;
use crate::jets::{Jet, JetError};

pub use diffeo::DiffeoJet;
pub use field::VectorField;
pub use form::PForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("objects live on different spaces")]
    AmbientMismatch,
    #[error("index tuple {0:?} is not strictly increasing within range")]
    BadIndex(Vec<usize>),
    #[error("interior product of a 0-form")]
    DegreeZero,
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("map does not fix the origin")]
    NotAtOrigin,
    #[error("vector field is not linear diagonal with positive integer weights")]
    NotDiagonal,
    #[error("integrability of a {0}-form needs a decomposition into 1-forms")]
    NeedsDecomposition(usize),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// `Φ_*X = DΦ·(X∘Φ⁻¹)`. When `X(0) = 0` the order is kept, otherwise it
/// drops by one.
pub fn pushforward_field<F: Field>(
    phi: &DiffeoJet<F>,
    x: &VectorField<F>,
) -> Result<VectorField<F>, CalcError> {
    if phi.n() != x.n() {
        return Err(CalcError::AmbientMismatch);
    }
    let n = phi.n();
    let order = phi.order().min(x.order());
    let psi = phi.with_order(order).inverse()?;
    let singular = x.is_singular();
    let x_psi: Vec<Jet<F>> = x
        .components()
        .iter()
        .map(|c| c.with_order(order).compose(psi.components()))
        .collect::<Result<_, _>>()?;
    // with X(0) = 0 the unknown top degree of DΦ only reaches degree N+1
    let target = if singular { order } else { order.saturating_sub(1) };
    let comps = (0..n)
        .map(|i| {
            let mut acc = Jet::zero(n, target);
            for (j, xj) in x_psi.iter().enumerate() {
                if xj.is_zero() {
                    continue;
                }
                let dij = phi.component(i).with_order(order).partial_padded(j);
                let term = &dij.compose(psi.components())? * xj;
                acc = &acc + &term.with_order(target);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>, JetError>>()?;
    VectorField::new(comps)
}

#[derive(Debug, Clone)]
pub struct IntegrabilityReport<F: Field> {
    pub integrable: bool,
    /// `Ω∧dΩ`, or one `dω_j∧Ω` per decomposition factor.
    pub residuals: Vec<PForm<F>>,
    /// Order up to which the verdict holds.
    pub order: usize,
}

/// Frobenius test. A 1-form is checked through `Ω∧dΩ`; a p-form needs the
/// factors `ω_1…ω_p` of a decomposition and checks every `dω_j∧Ω`.
pub fn integrability_check<F: Field>(
    omega: &PForm<F>,
    decomposition: Option<&[PForm<F>]>,
) -> Result<IntegrabilityReport<F>, CalcError> {
    let residuals = match decomposition {
        None if omega.degree() == 1 => vec![omega.wedge(&omega.d())?],
        None => return Err(CalcError::NeedsDecomposition(omega.degree())),
        Some(parts) => parts
            .iter()
            .map(|w| w.d().wedge(omega))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let order = residuals.iter().map(|r| r.order()).min().unwrap_or(omega.order());
    Ok(IntegrabilityReport {
        integrable: residuals.iter().all(|r| r.is_zero()),
        residuals,
        order,
    })
}

#[derive(Debug, Clone)]
pub struct QuasiHomogeneity<F: Field> {
    /// `k` with `L_Sη = k·η`, when it exists.
    pub weight: Option<F>,
    /// Whether `i_Sη = 0`.
    pub conical: bool,
    pub order: usize,
}

/// Positive integer weights of a linear diagonal field.
pub fn diagonal_weights<F: Field>(s: &VectorField<F>) -> Result<Vec<i64>, CalcError> {
    let n = s.n();
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        let c = s.component(i);
        let mut e = vec![0u32; n];
        e[i] = 1;
        let si = c.coeff(&e);
        let rest = c - &Jet::monomial(n, c.order(), &e, si.clone());
        let k = si.as_small_int().filter(|&k| k > 0);
        match k {
            Some(k) if rest.is_zero() => w.push(k),
            _ => return Err(CalcError::NotDiagonal),
        }
    }
    Ok(w)
}

/// Checks `L_Sη = k·η` for a linear diagonal `S`, and whether `i_Sη = 0`.
pub fn quasi_homogeneity_check<F: Field>(
    eta: &PForm<F>,
    s: &VectorField<F>,
) -> Result<QuasiHomogeneity<F>, CalcError> {
    diagonal_weights(s)?;
    let l = eta.lie(s)?;
    let order = l.order();
    let eta_t = eta.with_order(order);
    let conical = eta.degree() > 0 && eta.interior(s)?.is_zero();
    let first = eta_t
        .components()
        .flat_map(|(idx, f)| f.terms().map(move |(e, c)| (idx.clone(), e.to_vec(), c.clone())))
        .next();
    let weight = match first {
        None => Some(F::zero()),
        Some((idx, e, c)) => {
            let k = l.get(&idx).coeff(&e) / c;
            l.agrees_with(&eta_t.scale(&k)).then_some(k)
        }
    };
    Ok(QuasiHomogeneity {
        weight,
        conical,
        order,
    })
}
