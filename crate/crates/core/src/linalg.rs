//! Dense linear algebra over a [`Field`].
//!
//! Exact fields use first-nonzero pivoting; floats use partial pivoting by
//! modulus and treat entries below [`crate::coeff::FLOAT_TOL`] as zero.

use crate::coeff::Field;

pub type Mat<F> = Vec<Vec<F>>;

pub fn identity<F: Field>(n: usize) -> Mat<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

pub fn zeros<F: Field>(rows: usize, cols: usize) -> Mat<F> {
    vec![vec![F::zero(); cols]; rows]
}

pub fn mat_mul<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let k = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = F::zero();
                    for l in 0..k {
                        if !row[l].is_zero() && !b[l][j].is_zero() {
                            s = s + row[l].clone() * b[l][j].clone();
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &Mat<F>, v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(F::zero(), |s, (x, y)| s + x.clone() * y.clone())
        })
        .collect()
}

pub fn mat_sub<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() - y.clone()).collect())
        .collect()
}

pub fn mat_add<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() + y.clone()).collect())
        .collect()
}

pub fn mat_scale<F: Field>(a: &Mat<F>, c: &F) -> Mat<F> {
    a.iter()
        .map(|r| r.iter().map(|x| x.clone() * c.clone()).collect())
        .collect()
}

pub fn is_zero_mat<F: Field>(a: &Mat<F>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_negligible()))
}

pub fn mat_approx_eq<F: Field>(a: &Mat<F>, b: &Mat<F>) -> bool {
    a.len() == b.len() && is_zero_mat(&mat_sub(a, b))
}

pub fn transpose<F: Field>(a: &Mat<F>) -> Mat<F> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn is_diagonal<F: Field>(a: &Mat<F>) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_negligible()))
}

pub fn mat_pow<F: Field>(a: &Mat<F>, e: u32) -> Mat<F> {
    let mut acc = identity(a.len());
    for _ in 0..e {
        acc = mat_mul(&acc, a);
    }
    acc
}

fn pick_pivot<F: Field>(m: &Mat<F>, col: usize, from: usize) -> Option<usize> {
    if F::EXACT {
        (from..m.len()).find(|&r| !m[r][col].is_zero())
    } else {
        (from..m.len())
            .filter(|&r| !m[r][col].is_negligible())
            .max_by(|&a, &b| m[a][col].magnitude().total_cmp(&m[b][col].magnitude()))
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Mat<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(m, c, r) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut().skip(c) {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                if !m[r][j].is_zero() {
                    let t = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
            if !F::EXACT {
                m[i][c] = F::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(a: &Mat<F>) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Basis of `{v : a·v = 0}`, one vector per free column with that entry 1.
pub fn nullspace<F: Field>(a: &Mat<F>, cols: usize) -> Vec<Vec<F>> {
    if a.is_empty() {
        return (0..cols)
            .map(|k| (0..cols).map(|j| if j == k { F::one() } else { F::zero() }).collect())
            .collect();
    }
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a·x = b`, or `None` when inconsistent.
pub fn solve<F: Field>(a: &Mat<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, |r| r.len());
    if a.is_empty() {
        return b.iter().all(|x| x.is_negligible()).then(|| vec![F::zero(); cols]);
    }
    let mut m: Mat<F> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&cols) {
        return None;
    }
    if !F::EXACT {
        // residual check against rounding
        for row in m.iter().skip(pivots.len()) {
            if !row[cols].is_negligible() {
                return None;
            }
        }
    }
    let mut x = vec![F::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    Some(x)
}

pub fn inverse<F: Field>(a: &Mat<F>) -> Option<Mat<F>> {
    let n = a.len();
    let mut m: Mat<F> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det<F: Field>(a: &Mat<F>) -> F {
    let n = a.len();
    if n == 0 {
        return F::one();
    }
    let mut m = a.clone();
    let mut sign = F::one();
    let mut prev = F::one();
    for k in 0..n - 1 {
        if m[k][k].is_negligible() {
            let Some(p) = ((k + 1)..n).find(|&r| !m[r][k].is_negligible()) else {
                return F::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = t / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Coefficients `c_0..c_n` (constant first) of `det(x·I − a)`, by
/// Faddeev–LeVerrier.
pub fn char_poly<F: Field>(a: &Mat<F>) -> Vec<F> {
    let n = a.len();
    let mut c = vec![F::zero(); n + 1];
    c[n] = F::one();
    let mut m = zeros::<F>(n, n);
    for k in 1..=n {
        let mut next = mat_mul(a, &m);
        for i in 0..n {
            next[i][i] = next[i][i].clone() + c[n + 1 - k].clone();
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr = (0..n).fold(F::zero(), |s, i| s + am[i][i].clone());
        c[n - k] = -tr / F::from_i64(k as i64);
    }
    c
}
