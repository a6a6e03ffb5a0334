//! Infinitesimal isotropy of a tuple of homogeneous polynomials
//! `H = (h₁, …, h_ℓ)`: the Lie algebra of `{T : h_j∘T = α_j·h_j}`.

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::coeff::Field;
use crate::jets::{Jet, JetError};
use crate::linalg::{self, Mat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error("polynomial {0} is zero")]
    Zero(usize),
    #[error("polynomial {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("polynomials live in different numbers of variables")]
    AmbientMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix must be {0}×{0}")]
    BadShape(usize),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// One solution `(A, c)` of `X_A(h_j) = c_j·h_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement<F: Field> {
    pub matrix: Mat<F>,
    pub c: Vec<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidityReport<F: Field> {
    pub degrees: Vec<usize>,
    pub lie_basis: Vec<LieElement<F>>,
    pub dimension: usize,
    pub rigid_infinitesimal: bool,
    /// Non-identity coordinate permutations lying in the isotropy group.
    pub permutation_witnesses: Vec<Vec<usize>>,
    /// Whether all `n!` permutations fit in the search bound.
    pub search_complete: bool,
}

impl<F: Field> RigidityReport<F> {
    /// Infinitesimally rigid and no permutation witness within a complete
    /// search. The finite component group is not otherwise examined.
    pub fn rigid_with_search(&self) -> bool {
        self.rigid_infinitesimal && self.search_complete && self.permutation_witnesses.is_empty()
    }
}

pub const PERMUTATION_BOUND: usize = 1024;

fn degrees<F: Field>(h: &[Jet<F>]) -> Result<Vec<usize>, RigidityError> {
    let n = h.first().map_or(0, |p| p.n());
    h.iter()
        .enumerate()
        .map(|(j, p)| {
            if p.n() != n {
                return Err(RigidityError::AmbientMismatch);
            }
            let lo = p.valuation().ok_or(RigidityError::Zero(j))?;
            if p.degree() != Some(lo) {
                return Err(RigidityError::NotHomogeneous(j));
            }
            Ok(lo)
        })
        .collect()
}

/// `X_A(h)` for `A = E_{ik}`: `z_k·∂h/∂z_i`, as exponent → coefficient.
fn elementary_derivation<F: Field>(h: &Jet<F>, i: usize, k: usize) -> Vec<(Vec<u32>, F)> {
    h.terms()
        .filter(|(e, _)| e[i] > 0)
        .map(|(e, c)| {
            let mut img = e.to_vec();
            img[i] -= 1;
            img[k] += 1;
            (img, c.clone() * F::from_i64(e[i] as i64))
        })
        .collect()
}

/// `X_A = Σ_i (Az)_i ∂/∂z_i` applied to `h`.
pub fn linear_derivation<F: Field>(a: &Mat<F>, h: &Jet<F>) -> Jet<F> {
    let n = h.n();
    let mut out = Jet::zero(n, h.order());
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for (e, c) in elementary_derivation(h, i, k) {
                let prev = out.coeff(&e);
                out.set_coeff(&e, prev + c * a[i][k].clone());
            }
        }
    }
    out
}

/// Lie algebra of the isotropy group. Unknowns are the `n²` entries of `A`
/// (row-major) followed by `c₁…c_ℓ`.
pub fn isotropy_lie_algebra<F: Field>(h: &[Jet<F>]) -> Result<RigidityReport<F>, RigidityError> {
    isotropy_lie_algebra_bounded(h, PERMUTATION_BOUND)
}

pub fn isotropy_lie_algebra_bounded<F: Field>(
    h: &[Jet<F>],
    bound: usize,
) -> Result<RigidityReport<F>, RigidityError> {
    let degs = degrees(h)?;
    let n = h.first().map_or(0, |p| p.n());
    let l = h.len();
    let cols = n * n + l;
    let mut rows: BTreeMap<(usize, Vec<u32>), Vec<F>> = BTreeMap::new();
    let mut entry = |j: usize, e: Vec<u32>, col: usize, v: F| {
        let row = rows.entry((j, e)).or_insert_with(|| vec![F::zero(); cols]);
        row[col] = row[col].clone() + v;
    };
    for (j, p) in h.iter().enumerate() {
        for i in 0..n {
            for k in 0..n {
                for (e, c) in elementary_derivation(p, i, k) {
                    entry(j, e, i * n + k, c);
                }
            }
        }
        for (e, c) in p.terms() {
            entry(j, e.to_vec(), n * n + j, -c.clone());
        }
    }
    let m: Mat<F> = rows.into_values().collect();
    let lie_basis: Vec<LieElement<F>> = linalg::nullspace(&m, cols)
        .into_iter()
        .map(|v| LieElement {
            matrix: v[..n * n].chunks(n).map(|r| r.to_vec()).collect(),
            c: v[n * n..].to_vec(),
        })
        .collect();
    let dimension = lie_basis.len();
    let (permutation_witnesses, search_complete) = permutation_search(h, bound)?;
    Ok(RigidityReport {
        degrees: degs,
        dimension,
        rigid_infinitesimal: dimension == 1,
        lie_basis,
        permutation_witnesses,
        search_complete,
    })
}

fn flatten<F: Field>(e: &LieElement<F>) -> Vec<F> {
    e.matrix.iter().flatten().cloned().chain(e.c.iter().cloned()).collect()
}

/// Whether `(A, c)` lies in the span of the basis.
pub fn in_span<F: Field>(report: &RigidityReport<F>, elt: &LieElement<F>) -> bool {
    let basis: Mat<F> = report.lie_basis.iter().map(flatten).collect();
    let r = linalg::rank(&basis);
    let mut ext = basis;
    ext.push(flatten(elt));
    linalg::rank(&ext) == r
}

/// The identity with `c_j = deg h_j` (Euler's identity).
pub fn euler_element<F: Field>(report: &RigidityReport<F>, n: usize) -> LieElement<F> {
    LieElement {
        matrix: linalg::identity(n),
        c: report.degrees.iter().map(|&d| F::from_i64(d as i64)).collect(),
    }
}

/// `([A, B], 0)`; the characters are additive so their bracket vanishes.
pub fn bracket<F: Field>(a: &LieElement<F>, b: &LieElement<F>) -> LieElement<F> {
    let ab = linalg::mat_mul(&a.matrix, &b.matrix);
    let ba = linalg::mat_mul(&b.matrix, &a.matrix);
    LieElement {
        matrix: linalg::mat_sub(&ab, &ba),
        c: vec![F::zero(); a.c.len()],
    }
}

/// `h∘T` for the linear map `z ↦ Tz`.
pub fn compose_linear<F: Field>(h: &Jet<F>, t: &Mat<F>) -> Result<Jet<F>, RigidityError> {
    let n = h.n();
    let map: Vec<Jet<F>> = t
        .iter()
        .map(|row| {
            let terms: Vec<(Vec<u32>, F)> = (0..n)
                .map(|k| {
                    let mut e = vec![0; n];
                    e[k] = 1;
                    (e, row[k].clone())
                })
                .collect();
            Jet::from_terms(n, h.order(), terms.iter().map(|(e, c)| (e.as_slice(), c.clone())))
        })
        .collect();
    Ok(h.compose(&map)?)
}

/// The scalars `α_j` with `h_j∘T = α_j·h_j`, or `None` if some `h_j` is not
/// preserved up to a scalar.
pub fn isotropy_membership<F: Field>(h: &[Jet<F>], t: &Mat<F>) -> Result<Option<Vec<F>>, RigidityError> {
    degrees(h)?;
    let n = h.first().map_or(0, |p| p.n());
    if t.len() != n || t.iter().any(|r| r.len() != n) {
        return Err(RigidityError::BadShape(n));
    }
    if linalg::det(t).is_negligible() {
        return Err(RigidityError::Singular);
    }
    let mut alphas = Vec::with_capacity(h.len());
    for p in h {
        let img = compose_linear(p, t)?;
        let (e, c) = p.terms().next().expect("nonzero polynomial");
        let alpha = img.coeff(e) / c.clone();
        if !(&img - &p.scale(&alpha)).terms().all(|(_, c)| c.is_negligible()) {
            return Ok(None);
        }
        alphas.push(alpha);
    }
    Ok(Some(alphas))
}

pub fn permutation_matrix<F: Field>(perm: &[usize]) -> Mat<F> {
    let n = perm.len();
    // (Tz)_i = z_{perm[i]}
    (0..n)
        .map(|i| (0..n).map(|k| if perm[i] == k { F::one() } else { F::zero() }).collect())
        .collect()
}

/// Coordinate permutations in the isotropy group, trying at most `bound`
/// of them. Returns the witnesses and whether the search was exhaustive.
pub fn permutation_search<F: Field>(h: &[Jet<F>], bound: usize) -> Result<(Vec<Vec<usize>>, bool), RigidityError> {
    let n = h.first().map_or(0, |p| p.n());
    let total: usize = (1..=n).product();
    let mut found = Vec::new();
    for perm in (0..n).permutations(n).take(bound) {
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            continue;
        }
        if isotropy_membership(h, &permutation_matrix(&perm))?.is_some() {
            found.push(perm);
        }
    }
    Ok((found, total <= bound))
}

#[cfg(test)]
mod tests;
