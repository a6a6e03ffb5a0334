use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::testutil::{poly, q, Q};

fn coords(n: usize) -> Vec<Jet<Q>> {
    (0..n).map(|i| Jet::var(n, 1, i)).collect()
}

fn sum_all(n: usize, order: usize) -> Jet<Q> {
    (0..n).fold(Jet::zero(n, order), |acc, i| &acc + &Jet::var(n, order, i))
}

/// `z₁·z₂²⋯zₙⁿ` and `z₁+…+zₙ`.
fn h2(n: usize) -> Vec<Jet<Q>> {
    let deg = n * (n + 1) / 2;
    let e: Vec<u32> = (1..=n as u32).collect();
    vec![Jet::monomial(n, deg, &e, Q::one()), sum_all(n, deg)]
}

/// Independent assembly: impose `X_A(h_j)(p) = c_j·h_j(p)` at sample points.
fn sampled_dimension(h: &[Jet<Q>]) -> usize {
    let n = h[0].n();
    let l = h.len();
    let cols = n * n + l;
    let mut rows = Vec::new();
    for s in 0..(3 * cols) {
        let p: Vec<Q> = (0..n).map(|i| q(((s * 7 + i * 13 + 3) % 17) as i64 - 8, 1 + (s + i) as i64 % 3)).collect();
        for (j, hj) in h.iter().enumerate() {
            let mut row = vec![Q::zero(); cols];
            for i in 0..n {
                let di = hj.derivative(i).eval(&p);
                for k in 0..n {
                    // E_{ik} contributes z_k·∂_i h
                    row[i * n + k] = &di * &p[k];
                }
            }
            row[n * n + j] = -hj.eval(&p);
            rows.push(row);
        }
    }
    cols - linalg::rank(&rows)
}

fn check_basis(h: &[Jet<Q>], r: &RigidityReport<Q>) {
    for e in &r.lie_basis {
        for (j, hj) in h.iter().enumerate() {
            assert_eq!(linear_derivation(&e.matrix, hj), hj.scale(&e.c[j]));
        }
    }
}

#[test]
fn coordinates_give_diagonal_algebra() {
    for n in 1..=4 {
        let h = coords(n);
        let r = isotropy_lie_algebra(&h).unwrap();
        assert_eq!(r.dimension, n);
        assert_eq!(r.rigid_infinitesimal, n == 1);
        assert!(r.lie_basis.iter().all(|e| linalg::is_diagonal(&e.matrix)));
        check_basis(&h, &r);
    }
}

#[test]
fn three_lines_are_rigid() {
    let h = vec![Jet::var(2, 1, 0), Jet::var(2, 1, 1), sum_all(2, 1)];
    let r = isotropy_lie_algebra(&h).unwrap();
    assert_eq!(r.dimension, 1);
    assert!(r.rigid_infinitesimal);
    // coordinates plus their sum, in higher dimension
    let mut h = coords(4);
    h.push(sum_all(4, 1));
    assert_eq!(isotropy_lie_algebra(&h).unwrap().dimension, 1);
}

#[test]
fn monomial_and_sum_is_rigid() {
    for n in 2..=4 {
        let h = h2(n);
        let r = isotropy_lie_algebra(&h).unwrap();
        assert_eq!(r.dimension, 1, "n = {n}");
        assert_eq!(sampled_dimension(&h), 1);
        check_basis(&h, &r);
        assert!(in_span(&r, &euler_element(&r, n)));
    }
}

#[test]
fn four_branch_initial_jets_are_not_rigid() {
    // lowest jets of z₁²+z₂³, z₁, z₃, z₁+z₂
    let h = vec![
        poly(3, 2, &[(&[2, 0, 0], 1, 1)]),
        Jet::var(3, 1, 0),
        Jet::var(3, 1, 2),
        poly(3, 1, &[(&[1, 0, 0], 1, 1), (&[0, 1, 0], 1, 1)]),
    ];
    let r = isotropy_lie_algebra(&h).unwrap();
    assert_eq!(r.dimension, 3);
    assert_eq!(sampled_dimension(&h), 3);
    assert!(!r.rigid_infinitesimal);
}

#[test]
fn rejects_bad_input() {
    let mixed = poly(2, 2, &[(&[1, 0], 1, 1), (&[0, 2], 1, 1)]);
    assert_eq!(isotropy_lie_algebra(&[mixed]), Err(RigidityError::NotHomogeneous(0)));
    assert_eq!(isotropy_lie_algebra(&[Jet::<Q>::zero(2, 1)]), Err(RigidityError::Zero(0)));
    let sing = vec![vec![Q::one(), Q::one()], vec![Q::one(), Q::one()]];
    assert_eq!(isotropy_membership(&coords(2), &sing), Err(RigidityError::Singular));
}

#[test]
fn scalar_matrices_act_by_degree() {
    let h = h2(3);
    let rho = q(3, 2);
    let t = linalg::mat_scale(&linalg::identity(3), &rho);
    let alphas = isotropy_membership(&h, &t).unwrap().unwrap();
    assert_eq!(alphas, vec![rho.pow_i(6), rho.clone()]);
}

#[test]
fn swap_does_not_preserve_each_coordinate() {
    let swap = permutation_matrix::<Q>(&[1, 0]);
    assert_eq!(isotropy_membership(&coords(2), &swap).unwrap(), None);
}

#[test]
fn permutation_search_finds_finite_symmetry() {
    // (z₁z₂, z₁+z₂) is infinitesimally rigid but the swap preserves it
    let h = vec![poly(2, 2, &[(&[1, 1], 1, 1)]), sum_all(2, 2)];
    let r = isotropy_lie_algebra(&h).unwrap();
    assert!(r.rigid_infinitesimal);
    assert_eq!(r.permutation_witnesses, vec![vec![1, 0]]);
    assert!(r.search_complete);
    assert!(!r.rigid_with_search());
    assert!(isotropy_lie_algebra(&h2(3)).unwrap().rigid_with_search());
    // a bound below n! leaves the search incomplete
    let r = isotropy_lie_algebra_bounded(&h2(4), 5).unwrap();
    assert!(!r.search_complete);
}

#[test]
fn exponentials_of_basis_elements_are_members() {
    // diagonal: exp(diag(log 2, log 3, 0)) = diag(2, 3, 1)
    let h = coords(3);
    let t = vec![
        vec![q(2, 1), Q::zero(), Q::zero()],
        vec![Q::zero(), q(3, 1), Q::zero()],
        vec![Q::zero(), Q::zero(), Q::one()],
    ];
    assert_eq!(isotropy_membership(&h, &t).unwrap(), Some(vec![q(2, 1), q(3, 1), Q::one()]));
    // nilpotent: z₁∂₂ preserves h = z₁ and exp of it is I + E₂₁
    let h = vec![Jet::var(2, 1, 0)];
    let r = isotropy_lie_algebra(&h).unwrap();
    let nil = LieElement {
        matrix: vec![vec![Q::zero(), Q::zero()], vec![Q::one(), Q::zero()]],
        c: vec![Q::zero()],
    };
    assert!(in_span(&r, &nil));
    let t = linalg::mat_add(&linalg::identity(2), &nil.matrix);
    assert_eq!(isotropy_membership(&h, &t).unwrap(), Some(vec![Q::one()]));
}

/// Random homogeneous polynomial of degree `d` in `n` variables.
fn arb_homogeneous(n: usize, d: usize) -> impl Strategy<Value = Jet<Q>> {
    let count = crate::jets::Basis::get(n, d).count(d);
    proptest::collection::vec((-3i64..4, 0u8..2), count).prop_map(move |cs| {
        let b = crate::jets::Basis::get(n, d);
        let mut j = Jet::zero(n, d);
        for (k, (c, keep)) in cs.into_iter().enumerate() {
            if keep == 0 {
                j.block_mut(d)[k] = q(c, 1);
            }
        }
        if j.is_zero() {
            j.set_coeff(&b.monomials(d)[0], Q::one());
        }
        j
    })
}

fn arb_tuple() -> impl Strategy<Value = Vec<Jet<Q>>> {
    (2usize..4).prop_flat_map(|n| proptest::collection::vec((1usize..4).prop_flat_map(move |d| arb_homogeneous(n, d)), 1..4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_identity_in_span(h in arb_tuple()) {
        let r = isotropy_lie_algebra(&h).unwrap();
        prop_assert!(in_span(&r, &euler_element(&r, h[0].n())));
        prop_assert_eq!(r.rigid_infinitesimal, r.dimension == 1);
        check_basis(&h, &r);
    }

    #[test]
    fn bracket_closure(h in arb_tuple()) {
        let r = isotropy_lie_algebra(&h).unwrap();
        for a in &r.lie_basis {
            for b in &r.lie_basis {
                prop_assert!(in_span(&r, &bracket(a, b)));
            }
        }
    }

    #[test]
    fn assembled_and_sampled_dimensions_agree(h in arb_tuple()) {
        prop_assert_eq!(isotropy_lie_algebra(&h).unwrap().dimension, sampled_dimension(&h));
    }
}
