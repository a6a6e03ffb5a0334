use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::coeff::Field;
use crate::jets::{default_var_names, Jet};
use crate::linalg::Mat;

use super::CalcError;

/// A derivation `Σ X_j ∂/∂z_j` with jet coefficients.
#[derive(Clone)]
pub struct VectorField<F: Field> {
    comps: Vec<Jet<F>>,
}

impl<F: Field> VectorField<F> {
    pub fn new(comps: Vec<Jet<F>>) -> Result<Self, CalcError> {
        let n = comps.len();
        if comps.iter().any(|c| c.n() != n) {
            return Err(CalcError::AmbientMismatch);
        }
        let order = comps.iter().map(|c| c.order()).min().unwrap_or(0);
        Ok(Self {
            comps: comps.into_iter().map(|c| c.with_order(order)).collect(),
        })
    }

    pub fn zero(n: usize, order: usize) -> Self {
        Self {
            comps: (0..n).map(|_| Jet::zero(n, order)).collect(),
        }
    }

    /// `∂/∂z_i`.
    pub fn coordinate(n: usize, order: usize, i: usize) -> Self {
        let mut x = Self::zero(n, order);
        x.comps[i] = Jet::one(n, order);
        x
    }

    /// The radial field `R = Σ z_j ∂/∂z_j`.
    pub fn radial(n: usize, order: usize) -> Self {
        Self {
            comps: (0..n).map(|i| Jet::var(n, order, i)).collect(),
        }
    }

    /// Linear field `z ↦ A·z`.
    pub fn linear(a: &Mat<F>, order: usize) -> Self {
        let n = a.len();
        let comps = (0..n)
            .map(|i| {
                let mut c = Jet::zero(n, order);
                for j in 0..n {
                    if !a[i][j].is_zero() {
                        c = &c + &Jet::var(n, order, j).scale(&a[i][j]);
                    }
                }
                c
            })
            .collect();
        Self { comps }
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

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Whether `X(0) = 0`.
    pub fn is_singular(&self) -> bool {
        self.comps.iter().all(|c| c.constant_term().is_negligible())
    }

    /// `DX(0)`, with `[i][j] = ∂X_i/∂z_j(0)`.
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

    /// Lowest degree among the components.
    pub fn valuation(&self) -> Option<usize> {
        self.comps.iter().filter_map(|c| c.valuation()).min()
    }

    /// Homogeneous part of degree `d` of every component.
    pub fn homogeneous(&self, d: usize) -> Self {
        Self {
            comps: self.comps.iter().map(|c| c.homogeneous(d)).collect(),
        }
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self {
            comps: self.comps.iter().map(|c| c.with_order(order)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            comps: self.comps.iter().map(|x| x.scale(c)).collect(),
        }
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> VectorField<G> {
        VectorField {
            comps: self.comps.iter().map(|c| c.map_coeffs(&f)).collect(),
        }
    }

    /// `X(f) = Σ X_j ∂f/∂z_j`; keeps order `N` when `X(0) = 0`.
    pub fn apply(&self, f: &Jet<F>) -> Jet<F> {
        f.derivation(&self.comps)
    }

    /// Lie bracket `[X, Y]`.
    pub fn bracket(&self, other: &Self) -> Self {
        let comps = (0..self.n())
            .map(|i| &self.apply(&other.comps[i]) - &other.apply(&self.comps[i]))
            .collect();
        Self { comps }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.n() == other.n() && self.comps.iter().zip(&other.comps).all(|(a, b)| a.agrees_with(b))
    }

    /// Text form `[X_1, …, X_n]`.
    pub fn to_text_with(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_text_with(vars)).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl<F: Field> PartialEq for VectorField<F> {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.agrees_with(other)
    }
}

impl<F: Field> fmt::Debug for VectorField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField{}", self.to_text_with(&default_var_names(self.n())))
    }
}

impl<F: Field> Add for &VectorField<F> {
    type Output = VectorField<F>;
    fn add(self, o: &VectorField<F>) -> VectorField<F> {
        VectorField {
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<F: Field> Sub for &VectorField<F> {
    type Output = VectorField<F>;
    fn sub(self, o: &VectorField<F>) -> VectorField<F> {
        VectorField {
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<F: Field> Neg for &VectorField<F> {
    type Output = VectorField<F>;
    fn neg(self) -> VectorField<F> {
        self.scale(&-F::one())
    }
}
