use crate::calculus::{DiffeoJet, VectorField};
use crate::coeff::Field;
use crate::germdiff::formal_flow;
use crate::jets::Jet;

use super::BlowupError;

#[derive(Clone, Debug, PartialEq)]
pub enum Kind1D<F: Field> {
    /// `x̂^m dx̂`.
    Regular { m: usize },
    /// `λ dx̂/x̂`.
    SimplePole { lambda: F },
    /// `(1 + λx̂^{ℓ−1})/x̂^ℓ dx̂`, `ℓ ≥ 2`.
    HigherPole { l: usize, lambda: F },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm1D<F: Field> {
    pub kind: Kind1D<F>,
    /// `x̂ = G(x)` with `G*(model) = φ dx`, of order `N + 1`.
    pub change: Jet<F>,
}

/// `x·h`, one order higher.
fn times_x<F: Field>(h: &Jet<F>) -> Jet<F> {
    let mut g = Jet::zero(1, h.order() + 1);
    for (e, c) in h.terms() {
        g.set_coeff(&[e[0] + 1], c.clone());
    }
    g
}

/// `g/x` for `g(0) = 0`, one order lower.
fn over_x<F: Field>(g: &Jet<F>) -> Jet<F> {
    let mut h = Jet::zero(1, g.order().saturating_sub(1));
    for (e, c) in g.terms() {
        if e[0] > 0 {
            h.set_coeff(&[e[0] - 1], c.clone());
        }
    }
    h
}

/// The holomorphic numerator of `G*(model)`: the coefficient of `dx` times
/// `x^ℓ` for poles, divided by `x^m` in the regular case. Pulling back by
/// the identity gives the model's own numerator.
pub(super) fn pulled_numerator<F: Field>(kind: &Kind1D<F>, g: &Jet<F>) -> Result<Jet<F>, BlowupError> {
    let h = over_x(g);
    let gp = g.derivative(0);
    let order = gp.order();
    let h = h.with_order(order);
    Ok(match kind {
        Kind1D::Regular { m } => &h.pow(*m as u32) * &gp,
        Kind1D::SimplePole { lambda } => (&gp * &h.unit_inverse()?).scale(lambda),
        Kind1D::HigherPole { l, lambda } => {
            let l = *l as u32;
            let corr = &Jet::one(1, order) + &g.with_order(order).pow(l - 1).scale(lambda);
            &(&corr * &gp) * &h.unit_inverse()?.pow(l)
        }
    })
}

/// Normal form of `φ dx` with `φ = v/x^ℓ`, `v(0) ≠ 0`. A negative `ℓ = −m`
/// means a zero of order `m`.
pub fn normal_form_1d<F: Field>(l: i64, v: &Jet<F>) -> Result<NormalForm1D<F>, BlowupError> {
    if v.n() != 1 {
        return Err(BlowupError::NotOneVariable);
    }
    let v0 = v.constant_term();
    if v0.is_negligible() {
        return Err(BlowupError::NotUnit);
    }
    let order = v.order();
    if l <= 0 {
        // H = ∫x^m w = x^{m+1}W, x̂ = x·((m+1)W)^{1/(m+1)}
        let m = (-l) as usize;
        let mut big_w = Jet::zero(1, order);
        for (e, c) in v.terms() {
            let k = e[0] as i64;
            big_w.set_coeff(e, c.clone() * F::from_ratio(m as i64 + 1, m as i64 + 1 + k));
        }
        let u = big_w.root(m as u32 + 1)?;
        return Ok(NormalForm1D {
            kind: Kind1D::Regular { m },
            change: times_x(&u),
        });
    }
    if l == 1 {
        // λ dx/x + dφ̂, x̂ = x·exp(φ̂/λ)
        let lambda = v0;
        let mut phihat = Jet::zero(1, order);
        for (e, c) in v.terms() {
            if e[0] > 0 {
                phihat.set_coeff(e, c.clone() * F::from_ratio(1, e[0] as i64));
            }
        }
        let inv = lambda.inv().ok_or(BlowupError::NotUnit)?;
        let u = phihat.scale(&inv).exp()?;
        return Ok(NormalForm1D {
            kind: Kind1D::SimplePole { lambda },
            change: times_x(&u),
        });
    }
    let l = l as usize;
    let lambda = v.coeff(&[l as u32 - 1]);
    let kind = Kind1D::HigherPole {
        l,
        lambda: lambda.clone(),
    };
    // x̂ = x·h with h(0)^{1−ℓ} = v(0)
    let c = v0
        .nth_root(l as u32 - 1)
        .and_then(|r| r.inv())
        .ok_or(crate::jets::JetError::NoRoot(l as u32 - 1))?;
    let mut h = Jet::constant(1, order, c.clone());
    let lead = c.pow_i(-(l as i64));
    for k in 1..=order {
        if k == l - 1 {
            continue;
        }
        let num = pulled_numerator(&kind, &times_x(&h))?;
        let err = num.coeff(&[k as u32]) - v.coeff(&[k as u32]);
        if err.is_negligible() {
            continue;
        }
        // moving h_k by δ moves the x^k coefficient by (1+k−ℓ)·c^{−ℓ}·δ
        let slope = lead.clone() * F::from_i64(1 + k as i64 - l as i64);
        let delta = err / slope;
        h.set_coeff(&[k as u32], h.coeff(&[k as u32]) - delta);
    }
    Ok(NormalForm1D {
        kind,
        change: times_x(&h),
    })
}

impl<F: Field> NormalForm1D<F> {
    /// Whether `change*(model)` reproduces the input unit `v` to the
    /// effective order.
    pub fn residual_zero(&self, v: &Jet<F>) -> Result<bool, BlowupError> {
        Ok(pulled_numerator(&self.kind, &self.change)?.agrees_with(v))
    }

    /// The model numerator pulled back by the identity.
    pub fn model_numerator(&self, order: usize) -> Result<Jet<F>, BlowupError> {
        pulled_numerator(&self.kind, &Jet::var(1, order + 1, 0))
    }

    /// `Z = x^ℓ/(1 + λx^{ℓ−1}) ∂x` for a higher pole.
    pub fn model_field(&self, order: usize) -> Result<Option<VectorField<F>>, BlowupError> {
        let Kind1D::HigherPole { l, lambda } = &self.kind else {
            return Ok(None);
        };
        let x = Jet::var(1, order, 0);
        let den = &Jet::one(1, order) + &x.pow(*l as u32 - 1).scale(lambda);
        let z = &x.pow(*l as u32) * &den.unit_inverse()?;
        Ok(Some(VectorField::new(vec![z])?))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Centralizer<F: Field> {
    /// `h = δx`, `δ^{m+1} = 1`.
    Rotation { delta: F },
    /// `h = ρx`.
    Scaling { rho: F },
    /// `h = δ·exp(tZ)`, `δ^{ℓ−1} = 1`.
    Flow { delta: F, t: F },
    /// `h` preserves the model but is not of the expected shape.
    Rejected { reason: &'static str },
}

/// Classifies a symmetry `h` of the model form of `nf`.
pub fn centralizer_classify<F: Field>(
    nf: &NormalForm1D<F>,
    h: &DiffeoJet<F>,
) -> Result<Centralizer<F>, BlowupError> {
    if h.n() != 1 {
        return Err(BlowupError::NotOneVariable);
    }
    let g = h.component(0);
    let pulled = pulled_numerator(&nf.kind, g)?;
    let model = nf.model_numerator(g.order())?;
    if !pulled.agrees_with(&model) {
        let o = pulled.order().min(model.order());
        let d = (&pulled.with_order(o) - &model.with_order(o)).valuation().unwrap_or(0);
        return Err(BlowupError::NotPreserving(d));
    }
    let delta = g.coeff(&[1]);
    let linear = DiffeoJet::scalar(1, g.order(), delta.clone())?;
    Ok(match &nf.kind {
        Kind1D::Regular { m } => {
            if !h.agrees_with(&linear) {
                Centralizer::Rejected { reason: "not linear" }
            } else if !delta.pow_i(*m as i64 + 1).approx_eq(&F::one()) {
                Centralizer::Rejected { reason: "multiplier is not an (m+1)-th root of unity" }
            } else {
                Centralizer::Rotation { delta }
            }
        }
        Kind1D::SimplePole { .. } => {
            if h.agrees_with(&linear) {
                Centralizer::Scaling { rho: delta }
            } else {
                Centralizer::Rejected { reason: "not linear" }
            }
        }
        Kind1D::HigherPole { l, .. } => {
            if !delta.pow_i(*l as i64 - 1).approx_eq(&F::one()) {
                return Ok(Centralizer::Rejected { reason: "multiplier is not an (l-1)-th root of unity" });
            }
            let inv = delta.inv().ok_or(BlowupError::NotUnit)?;
            let rest = g.scale(&inv);
            let t = rest.coeff(&[*l as u32]);
            let z = nf.model_field(g.order())?.expect("higher pole has a model field");
            let flow = formal_flow(&z)?.evaluate(&t)?;
            if flow.component(0).agrees_with(&rest) {
                Centralizer::Flow { delta, t }
            } else {
                Centralizer::Rejected { reason: "not a flow of the model field" }
            }
        }
    })
}
