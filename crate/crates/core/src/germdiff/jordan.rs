use crate::calculus::DiffeoJet;
use crate::coeff::Field;
use crate::jets::Jet;
use crate::linalg::{self, Mat};

use super::GermError;

fn trim<F: Field>(mut p: Vec<F>) -> Vec<F> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_negligible()) {
        p.pop();
    }
    p
}

fn deriv<F: Field>(p: &[F]) -> Vec<F> {
    let d: Vec<F> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.clone() * F::from_i64(k as i64))
        .collect();
    if d.is_empty() {
        vec![F::zero()]
    } else {
        d
    }
}

fn is_zero_poly<F: Field>(p: &[F]) -> bool {
    p.iter().all(|c| c.is_negligible())
}

fn divrem<F: Field>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].inv().expect("divisor is nonzero");
    if r.len() < b.len() {
        return (vec![F::zero()], r);
    }
    let mut q = vec![F::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone() * lead.clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = r[k + j].clone() - c.clone() * bj.clone();
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

fn gcd<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !is_zero_poly(&b) {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().cloned().unwrap_or_else(F::one);
    let inv = lead.inv().unwrap_or_else(F::one);
    a.into_iter().map(|c| c * inv.clone()).collect()
}

fn eval_mat<F: Field>(p: &[F], a: &Mat<F>) -> Mat<F> {
    let n = a.len();
    let mut acc = linalg::zeros::<F>(n, n);
    for c in p.iter().rev() {
        acc = linalg::mat_mul(&acc, a);
        for i in 0..n {
            acc[i][i] = acc[i][i].clone() + c.clone();
        }
    }
    acc
}

/// Semisimple part of a matrix by Newton iteration on the squarefree part
/// of its characteristic polynomial; no eigenvalues are needed.
pub fn semisimple_part<F: Field>(l: &Mat<F>) -> Mat<F> {
    let chi = linalg::char_poly(l);
    let g = gcd(&chi, &deriv(&chi));
    let (p, _) = divrem(&chi, &g);
    let dp = deriv(&p);
    let mut a = l.clone();
    for _ in 0..64 {
        let pa = eval_mat(&p, &a);
        if linalg::is_zero_mat(&pa) {
            break;
        }
        let Some(inv) = linalg::inverse(&eval_mat(&dp, &a)) else {
            break;
        };
        a = linalg::mat_sub(&a, &linalg::mat_mul(&pa, &inv));
    }
    a
}

#[derive(Clone, Debug)]
pub struct JordanDecomposition<F: Field> {
    pub semisimple: DiffeoJet<F>,
    pub unipotent: DiffeoJet<F>,
    /// `ψ` with `ψ⁻¹∘φ_S∘ψ` linear.
    pub conjugator: DiffeoJet<F>,
    /// `ψ⁻¹∘φ∘ψ`, which commutes with the semisimple linear part.
    pub normal_form: DiffeoJet<F>,
    pub linear_semisimple: Mat<F>,
}

/// Degree-`k` block of `m(L·z)` for every monomial `m` of degree `k`, as
/// rows over the same monomial basis.
fn monomial_images<F: Field>(l: &Mat<F>, n: usize, k: usize) -> Vec<Vec<F>> {
    let lin: Vec<Jet<F>> = (0..n)
        .map(|i| {
            (0..n).fold(Jet::zero(n, k), |acc, j| {
                &acc + &Jet::var(n, k, j).scale(&l[i][j])
            })
        })
        .collect();
    let basis = crate::jets::Basis::get(n, k);
    basis
        .monomials(k)
        .iter()
        .map(|e| {
            let img = e
                .iter()
                .enumerate()
                .fold(Jet::one(n, k), |acc, (j, &p)| &acc * &lin[j].pow(p));
            img.block(k).to_vec()
        })
        .collect()
}

fn linear_after<F: Field>(a: &Mat<F>, comps: &[Jet<F>]) -> Vec<Jet<F>> {
    let n = comps.len();
    (0..n)
        .map(|i| {
            let mut acc = Jet::zero(n, comps[0].order());
            for j in 0..n {
                if !a[i][j].is_zero() {
                    acc = &acc + &comps[j].scale(&a[i][j]);
                }
            }
            acc
        })
        .collect()
}

/// Degree-`k` correction `Q` removing the part of `p` outside the kernel of
/// `T − I`, where `T(Q) = L_s⁻¹·Q∘L_s`.
fn general_correction<F: Field>(
    l: &Mat<F>,
    ls: &Mat<F>,
    ls_inv: &Mat<F>,
    n: usize,
    k: usize,
    p: &[F],
) -> Option<Vec<F>> {
    let c = p.len() / n;
    let img_s = monomial_images(ls, n, k);
    let img_l = monomial_images(l, n, k);
    let dim = n * c;
    let mut t_minus_i = linalg::zeros::<F>(dim, dim);
    let mut m = linalg::zeros::<F>(dim, dim);
    for j in 0..n {
        for s in 0..c {
            let col = j * c + s;
            for i in 0..n {
                for s2 in 0..c {
                    let row = i * c + s2;
                    let tv = ls_inv[i][j].clone() * img_s[s][s2].clone();
                    t_minus_i[row][col] = if row == col { tv - F::one() } else { tv };
                    let mut mv = if s == s2 { l[i][j].clone() } else { F::zero() };
                    if i == j {
                        mv = mv - img_l[s][s2].clone();
                    }
                    m[row][col] = mv;
                }
            }
        }
    }
    let kernel = linalg::nullspace(&t_minus_i, dim);
    // p = Σ a·kernel + (T − I)·v
    let aug: Mat<F> = (0..dim)
        .map(|r| {
            kernel
                .iter()
                .map(|kv| kv[r].clone())
                .chain(t_minus_i[r].iter().cloned())
                .collect()
        })
        .collect();
    let sol = linalg::solve(&aug, p)?;
    let v = &sol[kernel.len()..];
    let p_im = linalg::mat_vec(&t_minus_i, v);
    let mt = linalg::mat_mul(&m, &t_minus_i);
    let rhs: Vec<F> = p_im.iter().map(|x| -x.clone()).collect();
    let w = linalg::solve(&mt, &rhs)?;
    Some(linalg::mat_vec(&t_minus_i, &w))
}

/// Multiplicative Jordan decomposition `φ = φ_S∘φ_U` to order `N`.
///
/// Degree by degree, `φ` is conjugated by `id + Q` so that its Taylor term
/// commutes with the semisimple linear part `L_s`; then `φ_S = ψ∘L_s∘ψ⁻¹`
/// and `φ_U = ψ∘(L_s⁻¹∘φ̂)∘ψ⁻¹` for the accumulated conjugator `ψ`.
pub fn jordan_decompose<F: Field>(phi: &DiffeoJet<F>) -> Result<JordanDecomposition<F>, GermError> {
    let n = phi.n();
    let order = phi.order();
    let l = phi.linear_part();
    let diagonal = linalg::is_diagonal(&l);
    let ls = if diagonal { l.clone() } else { semisimple_part(&l) };
    let ls_inv = linalg::inverse(&ls).ok_or(crate::calculus::CalcError::SingularLinearPart)?;
    let mut psi = DiffeoJet::identity(n, order);
    let mut phat = phi.clone();
    let basis = crate::jets::Basis::get(n, order);
    for k in 2..=order {
        let c = basis.count(k);
        let p: Vec<F> = (0..n)
            .flat_map(|i| phat.component(i).block(k).to_vec())
            .collect();
        if p.iter().all(|x| x.is_negligible()) {
            continue;
        }
        let q = if diagonal {
            let lam: Vec<F> = (0..n).map(|i| l[i][i].clone()).collect();
            let mut q = vec![F::zero(); n * c];
            for (s, e) in basis.monomials(k).iter().enumerate() {
                let mu = e
                    .iter()
                    .zip(&lam)
                    .fold(F::one(), |acc, (&p, x)| acc * x.pow_i(p as i64));
                for i in 0..n {
                    let diff = lam[i].clone() - mu.clone();
                    if !diff.is_negligible() {
                        q[i * c + s] = -p[i * c + s].clone() / diff;
                    }
                }
            }
            q
        } else {
            general_correction(&l, &ls, &ls_inv, n, k, &p).ok_or(GermError::Resonance(k))?
        };
        if q.iter().all(|x| x.is_negligible()) {
            continue;
        }
        let chi_comps: Vec<Jet<F>> = (0..n)
            .map(|i| {
                let mut j = Jet::var(n, order, i);
                for (s, e) in basis.monomials(k).iter().enumerate() {
                    let v = q[i * c + s].clone();
                    if !v.is_zero() {
                        j.set_coeff(e, v);
                    }
                }
                j
            })
            .collect();
        let chi = DiffeoJet::new(chi_comps)?;
        psi = psi.compose(&chi)?;
        phat = chi.inverse()?.compose(&phat)?.compose(&chi)?;
    }
    let ls_map = DiffeoJet::linear(&ls, order)?;
    let u = DiffeoJet::new(linear_after(&ls_inv, phat.components()))?;
    let psi_inv = psi.inverse()?;
    let semisimple = psi.compose(&ls_map)?.compose(&psi_inv)?;
    let unipotent = psi.compose(&u)?.compose(&psi_inv)?;
    Ok(JordanDecomposition {
        semisimple,
        unipotent,
        conjugator: psi,
        normal_form: phat,
        linear_semisimple: ls,
    })
}
