use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use crate::jets::{Basis, Jet};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Sparse random rational jet: each coefficient is kept with probability 1/3.
pub fn arb_jet(n: usize, order: usize) -> impl Strategy<Value = Jet<Q>> {
    let b = Basis::get(n, order);
    let total: usize = (0..=order).map(|d| b.count(d)).sum();
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

/// Random jet with zero constant term.
pub fn arb_vanishing(n: usize, order: usize) -> impl Strategy<Value = Jet<Q>> {
    arb_jet(n, order).prop_map(|mut j| {
        j.block_mut(0)[0] = Q::zero();
        j
    })
}

/// Random jet with zero constant and linear terms.
pub fn arb_nonlinear(n: usize, order: usize) -> impl Strategy<Value = Jet<Q>> {
    arb_vanishing(n, order).prop_map(move |mut j| {
        for x in j.block_mut(1).iter_mut().take(n) {
            *x = Q::zero();
        }
        j
    })
}

/// Parses a polynomial written as `[(exponents, num, den)]`.
pub fn poly(n: usize, order: usize, terms: &[(&[u32], i64, i64)]) -> Jet<Q> {
    Jet::from_terms(n, order, terms.iter().map(|(e, a, b)| (*e, q(*a, *b))))
}
