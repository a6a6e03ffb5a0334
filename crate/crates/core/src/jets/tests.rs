use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::coeff::GaussianRational;

type Q = BigRational;
type Poly = BTreeMap<Vec<u32>, Q>;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn jet(n: usize, order: usize, terms: &[(&[u32], Q)]) -> Jet<Q> {
    Jet::from_terms(n, order, terms.iter().map(|(e, c)| (*e, c.clone())))
}

// naive sparse oracle: multiply then drop terms above the order
fn poly_mul(a: &Poly, b: &Poly, order: u32) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().sum::<u32>() > order {
                continue;
            }
            *out.entry(e).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn to_poly(j: &Jet<Q>) -> Poly {
    j.terms().map(|(e, c)| (e.to_vec(), c.clone())).collect()
}

fn oracle_compose(f: &Jet<Q>, map: &[Jet<Q>], order: u32) -> Poly {
    let k = map[0].n();
    let mut out = Poly::new();
    for (e, c) in f.terms() {
        let mut term: Poly = [(vec![0; k], c.clone())].into_iter().collect();
        for (i, &p) in e.iter().enumerate() {
            for _ in 0..p {
                term = poly_mul(&term, &to_poly(&map[i]), order);
            }
        }
        for (m, v) in term {
            *out.entry(m).or_insert_with(Q::zero) += v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[test]
fn basis_is_graded_lex() {
    let b = Basis::get(2, 2);
    let all: Vec<Vec<u32>> = (0..=2).flat_map(|d| b.monomials(d).to_vec()).collect();
    assert_eq!(
        all,
        vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![1, 1],
            vec![0, 2]
        ]
    );
}

#[test]
fn compose_examples() {
    let f = jet(1, 4, &[(&[2], q(1, 1))]);
    let x = Jet::<Q>::var(2, 4, 0);
    let y = Jet::<Q>::var(2, 4, 1);
    let got = f.compose(&[&x + &y]).unwrap();
    let want = jet(2, 4, &[(&[2, 0], q(1, 1)), (&[1, 1], q(2, 1)), (&[0, 2], q(1, 1))]);
    assert_eq!(got, want);

    let f = jet(1, 3, &[(&[1], q(1, 1)), (&[2], q(1, 1))]);
    let got = f.compose(&[jet(1, 3, &[(&[1], q(2, 1))])]).unwrap();
    assert_eq!(got, jet(1, 3, &[(&[1], q(2, 1)), (&[2], q(4, 1))]));
}

#[test]
fn compose_geometric_against_oracle() {
    let n = 8;
    let terms: Vec<(Vec<u32>, Q)> = (0..=n as u32).map(|k| (vec![k], Q::one())).collect();
    let f = Jet::from_terms(1, n, terms.iter().map(|(e, c)| (e.as_slice(), c.clone())));
    let g_terms: Vec<(Vec<u32>, Q)> = (1..=n as u32).map(|k| (vec![k], Q::one())).collect();
    let g = Jet::from_terms(1, n, g_terms.iter().map(|(e, c)| (e.as_slice(), c.clone())));
    let got = f.compose(std::slice::from_ref(&g)).unwrap();
    assert_eq!(to_poly(&got), oracle_compose(&f, &[g], n as u32));
    // 1/(1 − x/(1−x)) = (1−x)/(1−2x): coefficient of x^k is 2^{k−1}
    assert_eq!(got.coeff(&[5]), q(16, 1));
}

#[test]
fn compose_rejects_constant_term() {
    let f = Jet::<Q>::var(1, 3, 0);
    let bad = Jet::<Q>::one(1, 3);
    assert_eq!(f.compose(&[bad]), Err(JetError::NonzeroConstant(0)));
    assert!(matches!(
        f.compose(&[]),
        Err(JetError::VariableMismatch { .. })
    ));
}

#[test]
fn unit_inverse_examples() {
    assert_eq!(Jet::<Q>::one(2, 3).unit_inverse().unwrap(), Jet::one(2, 3));
    let u = jet(1, 3, &[(&[0], q(1, 1)), (&[1], q(1, 1))]);
    let want = jet(
        1,
        3,
        &[(&[0], q(1, 1)), (&[1], q(-1, 1)), (&[2], q(1, 1)), (&[3], q(-1, 1))],
    );
    assert_eq!(u.unit_inverse().unwrap(), want);
    let u = jet(2, 4, &[(&[0, 0], q(2, 1)), (&[1, 0], q(1, 1)), (&[0, 2], q(1, 1))]);
    let v = u.unit_inverse().unwrap();
    assert_eq!(&u * &v, Jet::one(2, 4));
    assert_eq!(Jet::<Q>::var(1, 3, 0).unit_inverse(), Err(JetError::NotUnit));
}

#[test]
fn exp_log_examples() {
    assert_eq!(Jet::<Q>::zero(2, 4).exp().unwrap(), Jet::one(2, 4));
    let x = Jet::<Q>::var(1, 3, 0);
    let want = jet(
        1,
        3,
        &[(&[0], q(1, 1)), (&[1], q(1, 1)), (&[2], q(1, 2)), (&[3], q(1, 6))],
    );
    assert_eq!(x.exp().unwrap(), want);
    let f = jet(2, 5, &[(&[1, 0], q(1, 1)), (&[0, 2], q(1, 1))]);
    assert_eq!(f.exp().unwrap().log().unwrap(), f);
    assert_eq!(Jet::<Q>::one(1, 2).exp(), Err(JetError::BadConstant("0")));
}

#[test]
fn roots_of_units() {
    let u = jet(2, 5, &[(&[0, 0], q(4, 1)), (&[1, 0], q(1, 1)), (&[1, 1], q(3, 1))]);
    let r = u.root(2).unwrap();
    assert_eq!(&r * &r, u);
    let g = Jet::<GaussianRational>::constant(1, 3, GaussianRational::from_ints(-1, 0));
    let r = g.root(2).unwrap();
    assert_eq!(&r * &r, g);
}

#[test]
fn derivative_lowers_order() {
    let f = jet(2, 4, &[(&[3, 1], q(1, 1)), (&[1, 0], q(2, 1))]);
    let d = f.derivative(0);
    assert_eq!(d.order(), 3);
    assert_eq!(d, jet(2, 3, &[(&[2, 1], q(3, 1)), (&[0, 0], q(2, 1))]));
}

#[test]
fn mixed_order_is_flagged() {
    let a = Jet::<Q>::var(1, 5, 0);
    let b = Jet::<Q>::var(1, 3, 0);
    let s = &a + &b;
    assert_eq!(s.order(), 3);
    assert!(s.mixed_order());
    assert!(!(&a + &a).mixed_order());
}

#[test]
fn text_form() {
    let f = jet(3, 3, &[(&[2, 1, 0], q(3, 2)), (&[0, 0, 1], q(-1, 1))]);
    assert_eq!(f.to_string(), "-z + 3/2*x^2*y");
    let g = Jet::<GaussianRational>::monomial(3, 3, &[0, 0, 1], GaussianRational::i());
    assert_eq!(g.to_string(), "(0+1i)*z");
}

fn arb_jet(n: usize, order: usize) -> impl Strategy<Value = Jet<Q>> {
    let count = Basis::get(n, order);
    let total: usize = (0..=order).map(|d| count.count(d)).sum();
    proptest::collection::vec((-4i64..5, 1i64..4, 0u8..3), total).prop_map(move |cs| {
        let b = Basis::get(n, order);
        let mut j = Jet::zero(n, order);
        let mut it = cs.into_iter();
        for d in 0..=order {
            for k in 0..b.count(d) {
                let (a, den, keep) = it.next().unwrap();
                if keep == 0 {
                    j.block_mut(d)[k] = q(a, den);
                }
            }
        }
        j
    })
}

fn arb_nonconst(n: usize, order: usize) -> impl Strategy<Value = Jet<Q>> {
    arb_jet(n, order).prop_map(|mut j| {
        j.block_mut(0)[0] = Q::zero();
        j
    })
}

fn arb_dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 0usize..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms((a, b, c) in arb_dims().prop_flat_map(|(n, o)| (arb_jet(n, o), arb_jet(n, o), arb_jet(n, o)))) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        let n = a.n();
        let o = a.order();
        prop_assert_eq!(&a * &Jet::one(n, o), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn product_matches_oracle((a, b) in arb_dims().prop_flat_map(|(n, o)| (arb_jet(n, o), arb_jet(n, o)))) {
        let o = a.order() as u32;
        prop_assert_eq!(to_poly(&(&a * &b)), poly_mul(&to_poly(&a), &to_poly(&b), o));
    }

    #[test]
    fn compose_associative(
        (f, g, h) in (1usize..=2, 1usize..=4).prop_flat_map(|(n, o)| {
            (arb_jet(n, o), proptest::collection::vec(arb_nonconst(n, o), n), proptest::collection::vec(arb_nonconst(n, o), n))
        })
    ) {
        let gh: Vec<Jet<Q>> = g.iter().map(|gi| gi.compose(&h).unwrap()).collect();
        let lhs = f.compose(&gh).unwrap();
        let rhs = f.compose(&g).unwrap().compose(&h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_matches_oracle(
        (f, g) in (1usize..=2, 1usize..=4).prop_flat_map(|(n, o)| {
            (arb_jet(n, o), proptest::collection::vec(arb_nonconst(n, o), n))
        })
    ) {
        let o = f.order() as u32;
        prop_assert_eq!(to_poly(&f.compose(&g).unwrap()), oracle_compose(&f, &g, o));
    }

    #[test]
    fn unit_inverse_is_inverse(u in arb_dims().prop_flat_map(|(n, o)| arb_jet(n, o))) {
        let mut u = u;
        u.block_mut(0)[0] = q(3, 2);
        let v = u.unit_inverse().unwrap();
        prop_assert_eq!(&u * &v, Jet::one(u.n(), u.order()));
    }

    #[test]
    fn exp_is_additive((f, g) in arb_dims().prop_flat_map(|(n, o)| (arb_nonconst(n, o), arb_nonconst(n, o)))) {
        let lhs = (&f + &g).exp().unwrap();
        let rhs = &f.exp().unwrap() * &g.exp().unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }
}
