use std::fmt;

use crate::coeff::Field;
use crate::jets::{default_var_names, Jet};
use crate::linalg::{self, Mat};

use super::{CalcError, PForm};

/// Germ of a diffeomorphism of `(ℂⁿ, 0)` truncated at order `N`.
#[derive(Clone)]
pub struct DiffeoJet<F: Field> {
    comps: Vec<Jet<F>>,
}

impl<F: Field> DiffeoJet<F> {
    /// Checks zero constant terms and an invertible linear part.
    pub fn new(comps: Vec<Jet<F>>) -> Result<Self, CalcError> {
        let d = Self::new_unchecked(comps)?;
        if d.comps.iter().any(|c| !c.constant_term().is_negligible()) {
            return Err(CalcError::NotAtOrigin);
        }
        if linalg::det(&d.linear_part()).is_negligible() {
            return Err(CalcError::SingularLinearPart);
        }
        Ok(d)
    }

    /// Only checks shapes; used for intermediate maps.
    pub fn new_unchecked(comps: Vec<Jet<F>>) -> Result<Self, CalcError> {
        let n = comps.len();
        if comps.iter().any(|c| c.n() != n) {
            return Err(CalcError::AmbientMismatch);
        }
        let order = comps.iter().map(|c| c.order()).min().unwrap_or(0);
        Ok(Self {
            comps: comps.into_iter().map(|c| c.with_order(order)).collect(),
        })
    }

    pub fn identity(n: usize, order: usize) -> Self {
        Self {
            comps: (0..n).map(|i| Jet::var(n, order, i)).collect(),
        }
    }

    pub fn linear(a: &Mat<F>, order: usize) -> Result<Self, CalcError> {
        let n = a.len();
        let comps = (0..n)
            .map(|i| {
                let terms: Vec<(Vec<u32>, F)> = (0..n)
                    .map(|j| {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        (e, a[i][j].clone())
                    })
                    .collect();
                Jet::from_terms(n, order, terms.iter().map(|(e, c)| (e.as_slice(), c.clone())))
            })
            .collect();
        Self::new(comps)
    }

    /// `z ↦ ρ·z`.
    pub fn scalar(n: usize, order: usize, rho: F) -> Result<Self, CalcError> {
        let mut a = linalg::identity::<F>(n);
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = rho.clone();
        }
        Self::linear(&a, order)
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn order(&self) -> usize {
        self.comps.first().map_or(0, |c| c.order())
    }

    pub fn component(&self, i: usize) -> &Jet<F> {
        &self.comps[i]
    }

    pub fn components(&self) -> &[Jet<F>] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<Jet<F>> {
        self.comps
    }

    /// `DΦ(0)`, with `[i][j] = ∂Φ_i/∂z_j(0)`.
    pub fn linear_part(&self) -> Mat<F> {
        let n = self.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        self.comps[i].coeff(&e)
                    })
                    .collect()
            })
            .collect()
    }

    /// Terms of degree ≥ 2.
    pub fn nonlinear_part(&self) -> Vec<Jet<F>> {
        self.comps
            .iter()
            .map(|c| c.degree_range(2, c.order()))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.agrees_with(&Self::identity(self.n(), self.order()))
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self {
            comps: self.comps.iter().map(|c| c.with_order(order)).collect(),
        }
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> DiffeoJet<G> {
        DiffeoJet {
            comps: self.comps.iter().map(|c| c.map_coeffs(&f)).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, CalcError> {
        let comps = self
            .comps
            .iter()
            .map(|c| c.compose(&inner.comps))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CalcError::Jet)?;
        Ok(Self { comps })
    }

    /// `f ∘ self`.
    pub fn apply_to(&self, f: &Jet<F>) -> Result<Jet<F>, CalcError> {
        f.compose(&self.comps).map_err(CalcError::Jet)
    }

    /// Compositional inverse by the fixed point `ψ = L⁻¹(w − P∘ψ)`.
    pub fn inverse(&self) -> Result<Self, CalcError> {
        let n = self.n();
        let order = self.order();
        let linv = linalg::inverse(&self.linear_part()).ok_or(CalcError::SingularLinearPart)?;
        let p = self.nonlinear_part();
        let apply_linv = |v: &[Jet<F>]| -> Vec<Jet<F>> {
            (0..n)
                .map(|i| {
                    let mut acc = Jet::zero(n, order);
                    for (j, vj) in v.iter().enumerate() {
                        if !linv[i][j].is_zero() {
                            acc = &acc + &vj.scale(&linv[i][j]);
                        }
                    }
                    acc
                })
                .collect()
        };
        let id: Vec<Jet<F>> = (0..n).map(|i| Jet::var(n, order, i)).collect();
        let mut psi = apply_linv(&id);
        // each pass fixes one more degree
        for _ in 1..order {
            let rhs: Vec<Jet<F>> = p
                .iter()
                .zip(&id)
                .map(|(pi, zi)| Ok(zi - &pi.compose(&psi)?))
                .collect::<Result<_, crate::jets::JetError>>()
                .map_err(CalcError::Jet)?;
            let next = apply_linv(&rhs);
            let done = next.iter().zip(&psi).all(|(a, b)| a.agrees_with(b));
            psi = next;
            if done {
                break;
            }
        }
        Ok(Self { comps: psi })
    }

    /// `k`-fold iterate; negative `k` iterates the inverse.
    pub fn pow(&self, k: i64) -> Result<Self, CalcError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.n(), self.order());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    /// `Φ*a`.
    pub fn pullback(&self, a: &PForm<F>) -> Result<PForm<F>, CalcError> {
        a.pullback_by_map(&self.comps)
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.n() == other.n() && self.comps.iter().zip(&other.comps).all(|(a, b)| a.agrees_with(b))
    }

    /// Text form `[Φ_1, …, Φ_n]`.
    pub fn to_text_with(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_text_with(vars)).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl<F: Field> PartialEq for DiffeoJet<F> {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.agrees_with(other)
    }
}

impl<F: Field> fmt::Debug for DiffeoJet<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffeoJet{}", self.to_text_with(&default_var_names(self.n())))
    }
}
