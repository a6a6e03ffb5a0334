//! Numerical holonomy of `x·G(t, x^r) dt − F(t, x^r) dx` along loops in the
//! invariant leaf `x = 0`. Float only.

mod ode;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::jets::Jet;

pub use ode::{integrate, integrate_system, OdeFailure, OdeStats, StepControl};

type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolonomyError {
    #[error("F(γ(s), 0) vanishes near s = {0}")]
    FVanishes(f64),
    #[error("integration failed at s = {0}: step size underflow")]
    StepUnderflow(f64),
    #[error("integration exceeded the step budget")]
    TooManySteps,
    #[error("solution diverged at s = {0}")]
    Diverged(f64),
    #[error("loop is not closed (gap {0:e})")]
    NotClosed(f64),
    #[error("loops do not share a base point")]
    BasePointMismatch,
    #[error("multiplier {0} is not 1; tangency is undefined")]
    NotTangent(C64),
    #[error("least-squares fit failed")]
    FitFailed,
}

/// Sparse polynomial `Σ c·z^a·y^b`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly2 {
    pub terms: Vec<(u32, u32, C64)>,
}

impl Poly2 {
    pub fn new(terms: Vec<(u32, u32, C64)>) -> Self {
        Self { terms }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![(0, 0, c)])
    }

    pub fn eval(&self, z: C64, y: C64) -> C64 {
        self.terms
            .iter()
            .map(|&(a, b, c)| c * z.powu(a) * y.powu(b))
            .sum()
    }
}

/// The transverse equation `dx/ds = x·G(γ, x^r)/F(γ, x^r)·γ'`.
#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyField {
    pub g: Poly2,
    pub f: Poly2,
    pub r: u32,
}

impl HolonomyField {
    /// `x∂x + y·b(x, y)∂y` along `y = 0`, in the leaf coordinate `z = x`:
    /// `G = b`, `F = z`.
    pub fn diagonal_model(b: Poly2) -> Self {
        Self {
            g: b,
            f: Poly2::new(vec![(1, 0, C64::new(1.0, 0.0))]),
            r: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    /// `c + ρ·e^{i(θ₀ + 2π·turns·s)}`.
    Circle {
        center: C64,
        radius: f64,
        theta0: f64,
        turns: f64,
    },
    Line { from: C64, to: C64 },
}

impl Segment {
    pub fn point(&self, s: f64) -> C64 {
        match *self {
            Segment::Circle {
                center,
                radius,
                theta0,
                turns,
            } => center + C64::from_polar(radius, theta0 + 2.0 * PI * turns * s),
            Segment::Line { from, to } => from + (to - from) * s,
        }
    }

    pub fn velocity(&self, s: f64) -> C64 {
        match *self {
            Segment::Circle {
                radius,
                theta0,
                turns,
                ..
            } => C64::new(0.0, 2.0 * PI * turns) * C64::from_polar(radius, theta0 + 2.0 * PI * turns * s),
            Segment::Line { from, to } => to - from,
        }
    }

    pub fn reversed(&self) -> Self {
        match *self {
            Segment::Circle {
                center,
                radius,
                theta0,
                turns,
            } => Segment::Circle {
                center,
                radius,
                theta0: theta0 + 2.0 * PI * turns,
                turns: -turns,
            },
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
        }
    }
}

/// A closed piecewise-smooth path; each segment is run with `s ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    pub segments: Vec<Segment>,
}

pub const CLOSURE_TOL: f64 = 1e-12;

impl Loop {
    pub fn new(segments: Vec<Segment>) -> Result<Self, HolonomyError> {
        let l = Self { segments };
        for w in l.segments.windows(2) {
            let gap = (w[0].point(1.0) - w[1].point(0.0)).norm();
            if gap > CLOSURE_TOL {
                return Err(HolonomyError::NotClosed(gap));
            }
        }
        if let (Some(a), Some(b)) = (l.segments.first(), l.segments.last()) {
            let gap = (b.point(1.0) - a.point(0.0)).norm();
            if gap > CLOSURE_TOL {
                return Err(HolonomyError::NotClosed(gap));
            }
        }
        Ok(l)
    }

    /// `winding` turns around `center`, starting at `center + radius·e^{iθ₀}`.
    pub fn circle(center: C64, radius: f64, theta0: f64, winding: f64) -> Self {
        Self {
            segments: vec![Segment::Circle {
                center,
                radius,
                theta0,
                turns: winding,
            }],
        }
    }

    /// The constant loop at a point.
    pub fn constant(at: C64) -> Self {
        Self {
            segments: vec![Segment::Line { from: at, to: at }],
        }
    }

    pub fn base_point(&self) -> C64 {
        self.segments[0].point(0.0)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Result<Self, HolonomyError> {
        if (self.base_point() - other.base_point()).norm() > CLOSURE_TOL {
            return Err(HolonomyError::BasePointMismatch);
        }
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        Ok(Self { segments })
    }

    pub fn inverse(&self) -> Self {
        Self {
            segments: self.segments.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    /// `a·b·a⁻¹·b⁻¹`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self, HolonomyError> {
        a.then(b)?.then(&a.inverse())?.then(&b.inverse())
    }
}

#[derive(Clone, Debug)]
pub struct HolonomyOptions {
    pub jet_order: usize,
    /// Initial values `y₀` of the fit.
    pub grid: Vec<f64>,
    pub control: StepControl,
}

impl Default for HolonomyOptions {
    fn default() -> Self {
        Self {
            jet_order: 8,
            grid: (0..12).map(|k| 1e-2 * 0.5f64.powi(k)).collect(),
            control: StepControl::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct HolonomyDiagnostics {
    pub steps: usize,
    pub rejected: usize,
    pub max_local_error: f64,
    /// Largest residual of the least-squares fit over the grid.
    pub fit_residual: f64,
    /// `|multiplier − exp(∫ G(z,0)/F(z,0) dz)|`.
    pub multiplier_gap: f64,
}

#[derive(Clone, Debug)]
pub struct HolonomyMap {
    /// `h'(0)` from the fitted jet.
    pub multiplier: C64,
    /// `exp(∫_γ G(z,0)/F(z,0) dz)` by quadrature.
    pub integral_multiplier: C64,
    pub jet: Jet<C64>,
    /// Largest `y₀` of the fit; higher coefficients are only meaningful
    /// through their contribution `|a_k|·radius^{k−1}` on this disc.
    pub radius: f64,
    /// `uncertainty[k]` estimates the standard error of `a_k` from the
    /// integration error propagated through the fit.
    pub uncertainty: Vec<f64>,
    pub diagnostics: HolonomyDiagnostics,
}

impl HolonomyMap {
    pub fn coefficient(&self, k: usize) -> C64 {
        self.jet.coeff(&[k as u32])
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.jet.eval(&[x])
    }

    /// The jet of `other∘self`.
    pub fn then(&self, other: &Self) -> Jet<C64> {
        other
            .jet
            .compose(std::slice::from_ref(&self.jet))
            .expect("one-variable jets compose")
    }
}

fn check_f(field: &HolonomyField, lp: &Loop) -> Result<(), HolonomyError> {
    let zero = C64::new(0.0, 0.0);
    for seg in &lp.segments {
        for i in 0..=512 {
            let s = i as f64 / 512.0;
            if field.f.eval(seg.point(s), zero).norm() < 1e-10 {
                return Err(HolonomyError::FVanishes(s));
            }
        }
    }
    Ok(())
}

/// Transports `x₀` along the loop.
pub fn transport(
    field: &HolonomyField,
    lp: &Loop,
    x0: C64,
    control: StepControl,
) -> Result<(C64, OdeStats), HolonomyError> {
    let (x, st) = transport_all(field, lp, &[x0], control)?;
    Ok((x[0], st))
}

/// Transports several initial points with a shared step sequence.
pub fn transport_all(
    field: &HolonomyField,
    lp: &Loop,
    x0: &[C64],
    control: StepControl,
) -> Result<(Vec<C64>, OdeStats), HolonomyError> {
    let mut x = x0.to_vec();
    let mut total = OdeStats::default();
    for seg in &lp.segments {
        let rhs = |s: f64, x: &[C64], out: &mut [C64]| {
            let z = seg.point(s);
            let v = seg.velocity(s);
            for (o, &xi) in out.iter_mut().zip(x) {
                let y = xi.powu(field.r);
                *o = xi * field.g.eval(z, y) / field.f.eval(z, y) * v;
            }
        };
        let (x1, st) = integrate_system(&rhs, &x, control).map_err(|e| match e {
            OdeFailure::StepUnderflow(s) => HolonomyError::StepUnderflow(s),
            OdeFailure::TooManySteps => HolonomyError::TooManySteps,
            OdeFailure::NonFinite(s) => HolonomyError::Diverged(s),
        })?;
        x = x1;
        total.steps += st.steps;
        total.rejected += st.rejected;
        total.max_error = total.max_error.max(st.max_error);
    }
    Ok((x, total))
}

/// `∫_γ G(z,0)/F(z,0) dz` by composite 8-point Gauss–Legendre quadrature.
pub fn multiplier_integral(field: &HolonomyField, lp: &Loop) -> C64 {
    const NODES: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    let zero = C64::new(0.0, 0.0);
    let panels = 256;
    let mut acc = zero;
    for seg in &lp.segments {
        for p in 0..panels {
            let (a, b) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
            let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
            for (x, w) in NODES.iter().zip(WEIGHTS) {
                for s in [mid - half * x, mid + half * x] {
                    let z = seg.point(s);
                    acc += field.g.eval(z, zero) / field.f.eval(z, zero) * seg.velocity(s) * (w * half);
                }
            }
        }
    }
    acc
}

/// Holonomy jet fitted by least squares on a grid of transported points.
pub fn holonomy_map(
    field: &HolonomyField,
    lp: &Loop,
    opts: &HolonomyOptions,
) -> Result<HolonomyMap, HolonomyError> {
    check_f(field, lp)?;
    let mut diag = HolonomyDiagnostics::default();
    let scale = opts.grid.iter().cloned().fold(0.0, f64::max);
    let order = opts.jet_order.max(1);
    let rows = opts.grid.len();
    let mut a = DMatrix::<C64>::zeros(rows, order);
    let mut b = DVector::<C64>::zeros(rows);
    let starts: Vec<C64> = opts.grid.iter().map(|&y| C64::new(y, 0.0)).collect();
    let (ends, st) = transport_all(field, lp, &starts, opts.control)?;
    diag.steps = st.steps;
    diag.rejected = st.rejected;
    diag.max_local_error = st.max_error;
    for (i, (&y0, &y1)) in opts.grid.iter().zip(&ends).enumerate() {
        // columns in the scaled variable u = y/scale keep the system balanced;
        // rows are divided by u because the integration error is relative
        let u = y0 / scale;
        for j in 0..order {
            a[(i, j)] = C64::new(u.powi(j as i32), 0.0);
        }
        // fit the deviation from the identity so that trivial loops stay exact
        b[i] = (y1 - C64::new(y0, 0.0)) / y0;
    }
    let svd = a.clone().svd(true, true);
    let coeffs = svd.solve(&b, 1e-14).map_err(|_| HolonomyError::FitFailed)?;
    let resid = &a * &coeffs - &b;
    diag.fit_residual = resid
        .iter()
        .zip(&opts.grid)
        .map(|(c, &y)| c.norm() * y)
        .fold(0.0, f64::max);
    // with one shared step sequence the truncation error is a smooth function
    // of y₀ and is absorbed by the fit; what scatters between rows is
    // round-off, a random walk over the steps
    let eta = 4.0 * f64::EPSILON * (diag.steps as f64 + 1.0).sqrt();
    let v_t = svd.v_t.as_ref().ok_or(HolonomyError::FitFailed)?;
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut uncertainty = vec![0.0; order + 1];
    for j in 0..order {
        let var: f64 = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|&(_, &sv)| sv > 1e-14 * smax)
            .map(|(r, &sv)| v_t[(r, j)].norm_sqr() / (sv * sv))
            .sum();
        uncertainty[j + 1] = eta * var.sqrt() * scale.powi(-(j as i32));
    }
    let mut jet: Jet<C64> = Jet::var(1, order, 0);
    for j in 0..order {
        // a_k = c_k·scale^{1−k}
        let ak = coeffs[j] * scale.powi(-(j as i32));
        jet.set_coeff(&[j as u32 + 1], jet.coeff(&[j as u32 + 1]) + ak);
    }
    let integral_multiplier = multiplier_integral(field, lp).exp();
    let multiplier = jet.coeff(&[1]);
    diag.multiplier_gap = (multiplier - integral_multiplier).norm();
    Ok(HolonomyMap {
        multiplier,
        integral_multiplier,
        jet,
        radius: scale,
        uncertainty,
        diagnostics: diag,
    })
}

/// Least `k ≥ 2` with `|a_k| > tol` for `h` tangent to the identity.
///
/// Only coefficients resolved by the fit count: the scan stops at the first
/// `a_k` whose uncertainty exceeds `tol`, and a coefficient must also stand
/// out from its own noise.
pub fn tangency_order(h: &HolonomyMap, tol: f64) -> Result<Option<usize>, HolonomyError> {
    if (h.multiplier - C64::new(1.0, 0.0)).norm() > tol {
        return Err(HolonomyError::NotTangent(h.multiplier));
    }
    for k in 2..=h.jet.order() {
        let sigma = h.uncertainty.get(k).copied().unwrap_or(0.0);
        if sigma > tol {
            return Ok(None);
        }
        if h.coefficient(k).norm() > tol.max(3.0 * sigma) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Whether `h(x) = λx(1 + H(x^r))` up to `tol`: every coefficient of degree
/// `≢ 1 mod r` contributes at most `tol` relative to `x` on the fit disc.
pub fn ramification_check(h: &HolonomyMap, r: usize, tol: f64) -> bool {
    (2..=h.jet.order())
        .filter(|k| (k - 1) % r != 0)
        .all(|k| h.coefficient(k).norm() * h.radius.powi(k as i32 - 1) <= tol)
}

#[cfg(test)]
mod tests;
