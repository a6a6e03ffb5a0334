use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::calculus::{integrability_check, DiffeoJet, VectorField};
use crate::coeff::{CycloCtx, Cyclotomic};
use crate::germdiff::formal_flow;
use crate::testutil::{arb_jet, arb_vanishing, poly, q, Q};

fn x(n: usize, order: usize) -> Jet<Q> {
    Jet::var(n, order, 0)
}

fn y(n: usize, order: usize) -> Jet<Q> {
    Jet::var(n, order, 1)
}

/// `y dx + λ x dy`.
fn saddle(lambda: Q, order: usize) -> PForm<Q> {
    PForm::one_form(vec![y(2, order), x(2, order).scale(&lambda)])
}

#[test]
fn clear_simple_cases() {
    let l = LogForm::logarithmic(vec![(Q::one(), x(2, 5))]).unwrap();
    assert!(l.is_logarithmic());
    assert!(l.clear_denominators().agrees_with(&PForm::dz(2, 4, 0)));

    let (l1, l2) = (q(2, 3), q(-5, 1));
    let l = LogForm::logarithmic(vec![(l1.clone(), x(2, 5)), (l2.clone(), y(2, 5))]).unwrap();
    let want = PForm::one_form(vec![y(2, 4).scale(&l1), x(2, 4).scale(&l2)]);
    assert!(l.clear_denominators().agrees_with(&want));
}

#[test]
fn clear_with_exact_part() {
    let order = 6;
    let f = poly(2, order, &[(&[1, 0], 1, 1), (&[0, 2], 1, 1)]);
    let h = poly(2, order, &[(&[0, 0], 1, 1), (&[1, 1], -2, 1), (&[0, 3], 1, 2)]);
    let lam = q(3, 2);
    let l = LogForm::new(vec![Branch { lambda: lam.clone(), f: f.clone(), excess: 1 }], h.clone()).unwrap();
    assert!(!l.is_logarithmic());
    let df = PForm::function(f.clone()).d();
    let dh = PForm::function(h.clone()).d();
    let want = &(&df.mul_function(&f.scale(&lam)) + &dh.mul_function(&f)) - &df.mul_function(&h);
    assert!(l.clear_denominators().agrees_with(&want));
}

#[test]
fn branch_must_vanish() {
    let err = LogForm::logarithmic(vec![(Q::one(), Jet::<Q>::one(2, 3))]).unwrap_err();
    assert_eq!(err, LogFormError::BranchNotVanishing(0));
}

#[test]
fn integrating_factor_of_saddle() {
    for lam in [q(1, 2), q(-3, 7), q(5, 3), q(-1, 2)] {
        let f = integrating_factor_solve(&saddle(lam.clone(), 6), 4).unwrap();
        assert_eq!(f, poly(2, 6, &[(&[1, 1], 1, 1)]), "lambda {lam}");
    }
    let closed = PForm::function(poly(2, 5, &[(&[1, 1], 1, 1), (&[3, 0], 1, 1)])).d();
    assert_eq!(integrating_factor_solve(&closed, 3).unwrap(), Jet::one(2, 4));
    assert!(integrating_factor_solve(&saddle(q(1, 2), 6), 1).is_none());
}

#[test]
fn cofactor_examples() {
    let w = saddle(q(2, 1), 5);
    let id = DiffeoJet::identity(2, 5);
    assert_eq!(iso_cofactor(&id, &w).unwrap().cofactor().unwrap(), &Jet::one(2, 4));

    // homogeneous coefficients of degree 2
    let w2 = PForm::one_form(vec![
        poly(2, 5, &[(&[1, 1], 1, 1), (&[0, 2], 3, 1)]),
        poly(2, 5, &[(&[2, 0], -1, 1)]),
    ]);
    let rho = q(-2, 3);
    let h = DiffeoJet::scalar(2, 5, rho.clone()).unwrap();
    let u = iso_cofactor(&h, &w2).unwrap();
    assert_eq!(u.cofactor().unwrap().constant_term(), rho.pow_i(3));
    assert_eq!(u.cofactor().unwrap().num_terms(), 1);

    let swap = DiffeoJet::new(vec![y(2, 5), x(2, 5)]).unwrap();
    match iso_cofactor(&swap, &w).unwrap() {
        Membership::No { residual, .. } => assert!(!residual.is_zero()),
        other => panic!("expected no, got {other:?}"),
    }
}

#[test]
fn residue_action_delta_cycle() {
    let ctx = CycloCtx::new(3);
    let z = Cyclotomic::zeta(&ctx);
    let var = |i| Jet::<Cyclotomic>::var(3, 4, i);
    let l = LogForm::logarithmic(vec![
        (Cyclotomic::one(), var(0)),
        (z.clone(), var(1)),
        (z.clone() * z.clone(), var(2)),
    ])
    .unwrap();
    let phi = DiffeoJet::new(vec![var(2), var(0), var(1)]).unwrap();
    let act = residue_action(&phi, &l).unwrap();
    assert_eq!(act.c, z);
    assert_eq!(act.m, 3);
    assert!(act.c_pow_m_is_one);
    assert_eq!(act.sigma, vec![1, 2, 0]);
    // the same constant appears as the cofactor of the cleared form
    let u = iso_cofactor(&phi, &l.clear_denominators()).unwrap();
    assert_eq!(u.cofactor().unwrap().constant_term(), z);
}

#[test]
fn residue_action_swap_and_identity() {
    let lam = q(7, 3);
    let l = LogForm::logarithmic(vec![(lam.clone(), x(2, 4)), (-lam, y(2, 4))]).unwrap();
    let swap = DiffeoJet::new(vec![y(2, 4), x(2, 4)]).unwrap();
    let act = residue_action(&swap, &l).unwrap();
    assert_eq!((act.c, act.m, act.sigma), (q(-1, 1), 2, vec![1, 0]));
    let act = residue_action(&DiffeoJet::identity(2, 4), &l).unwrap();
    assert_eq!((act.c, act.m), (Q::one(), 1));
    assert_eq!(l.residue_relation().map(|r| r.2), Some(q(-1, 1)));
}

#[test]
fn residue_action_rejects_non_matching() {
    let l = LogForm::logarithmic(vec![(Q::one(), x(2, 4)), (q(1, 2), y(2, 4))]).unwrap();
    let shear = DiffeoJet::new(vec![&x(2, 4) + &y(2, 4), y(2, 4)]).unwrap();
    assert_eq!(residue_action(&shear, &l).unwrap_err(), LogFormError::BranchMatch(0));
    let swap = DiffeoJet::new(vec![y(2, 4), x(2, 4)]).unwrap();
    assert_eq!(residue_action(&swap, &l).unwrap_err(), LogFormError::InconsistentConstant);
}

#[test]
fn fix_conical() {
    let w = PForm::one_form(vec![-y(2, 4), x(2, 4)]);
    assert!(is_conical(&w));
    let two = DiffeoJet::scalar(2, 4, q(2, 1)).unwrap();
    assert_eq!(fix_test(&two, &w, FixHints::default()).unwrap().verdict, FixVerdict::Yes);
    let diag = DiffeoJet::linear(&vec![vec![q(2, 1), Q::zero()], vec![Q::zero(), q(3, 1)]], 4).unwrap();
    assert_eq!(fix_test(&diag, &w, FixHints::default()).unwrap().verdict, FixVerdict::No);
}

#[test]
fn fix_unipotent_cases() {
    // ω = d(x + y²), X = 2xy∂x − x∂y is tangent
    let w = PForm::function(poly(2, 6, &[(&[1, 0], 1, 1), (&[0, 2], 1, 1)])).d();
    let xf = VectorField::new(vec![poly(2, 5, &[(&[1, 1], 2, 1)]), poly(2, 5, &[(&[1, 0], -1, 1)])]).unwrap();
    let phi = formal_flow(&xf).unwrap().evaluate(&q(1, 2)).unwrap();
    let res = fix_test(&phi, &w, FixHints::default()).unwrap();
    assert_eq!(res.verdict, FixVerdict::Yes);

    let dx = PForm::dz(2, 6, 0);
    let phi = DiffeoJet::new(vec![poly(2, 6, &[(&[1, 0], 1, 1), (&[2, 0], 1, 1)]), y(2, 6)]).unwrap();
    let res = fix_test(&phi, &dx, FixHints::default()).unwrap();
    assert_eq!(res.verdict, FixVerdict::No);
    assert_eq!(res.closed_certificate, Some(true));
    assert!(res.integrating_factor.is_some());

    let not_iso = DiffeoJet::new(vec![&x(2, 6) + &y(2, 6), y(2, 6)]).unwrap();
    assert!(matches!(fix_test(&not_iso, &dx, FixHints::default()), Err(LogFormError::NotIso(_))));
}

#[test]
fn fix_jordan_case() {
    let dx = PForm::dz(2, 5, 0);
    let phi = DiffeoJet::new(vec![x(2, 5).scale(&q(2, 1)), poly(2, 5, &[(&[0, 1], 1, 1), (&[0, 2], 1, 1)])]).unwrap();
    let res = fix_test(&phi, &dx, FixHints::default()).unwrap();
    assert_eq!(res.verdict, FixVerdict::Unknown);
}

fn arb_branch(n: usize, order: usize) -> impl Strategy<Value = (Q, Jet<Q>)> {
    (-5i64..6, 1i64..4, arb_vanishing(n, order), 0..n).prop_map(move |(a, b, mut f, i)| {
        // keep a nonzero linear term so that branches are reduced
        f.set_coeff(&(0..n).map(|k| u32::from(k == i)).collect::<Vec<_>>(), Q::one());
        (q(a, b), f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cleared_forms_are_integrable(b1 in arb_branch(3, 4), b2 in arb_branch(3, 4), h in arb_jet(3, 4), e in 0u32..2) {
        let l = LogForm::new(vec![
            Branch { lambda: b1.0, f: b1.1, excess: e },
            Branch { lambda: b2.0, f: b2.1, excess: 0 },
        ], h).unwrap();
        let w = l.clear_denominators();
        prop_assert!(integrability_check(&w, None).unwrap().integrable);
    }

    #[test]
    fn integrating_factor_residual(b1 in arb_branch(2, 5), b2 in arb_branch(2, 5)) {
        let l = LogForm::logarithmic(vec![b1, b2]).unwrap();
        let w = l.clear_denominators();
        if let Some(f) = integrating_factor_solve(&w, 3) {
            prop_assert!(closedness_residual(&w, &f).is_zero());
        }
    }

    #[test]
    fn cofactor_cocycle(g1 in arb_vanishing(1, 5), h1 in arb_vanishing(2, 5), g2 in arb_vanishing(1, 5), h2 in arb_vanishing(2, 5)) {
        // maps (g(x), h(x, y)) preserve dx
        let make = |g: &Jet<Q>, h: &Jet<Q>| {
            let mut g2 = g.compose(&[x(2, 5)]).unwrap();
            g2.set_coeff(&[1, 0], q(2, 1));
            let mut h2 = h.clone();
            h2.set_coeff(&[0, 1], q(-1, 1));
            DiffeoJet::new(vec![g2, h2]).unwrap()
        };
        let (phi, psi) = (make(&g1, &h1), make(&g2, &h2));
        let w = PForm::dz(2, 6, 0);
        let u = iso_cofactor(&phi, &w).unwrap().cofactor().unwrap().clone();
        let v = iso_cofactor(&psi, &w).unwrap().cofactor().unwrap().clone();
        let uv = iso_cofactor(&phi.compose(&psi).unwrap(), &w).unwrap().cofactor().unwrap().clone();
        let want = &psi.apply_to(&u).unwrap() * &v;
        prop_assert!(uv.agrees_with(&want));
    }

    #[test]
    fn fixed_branches_give_constant_one(u1 in arb_jet(2, 4), u2 in arb_jet(2, 4), l1 in 1i64..5, l2 in -4i64..0) {
        let unit = |u: &Jet<Q>| {
            let mut u = u.clone();
            u.set_coeff(&[0, 0], Q::one());
            u
        };
        let l = LogForm::logarithmic(vec![
            (q(l1, 1), &x(2, 4) * &unit(&u1)),
            (q(l2, 1), &y(2, 4) * &unit(&u2)),
        ]).unwrap();
        let diag = DiffeoJet::linear(&vec![vec![q(2, 1), Q::zero()], vec![Q::zero(), q(3, 1)]], 4).unwrap();
        let act = residue_action(&diag, &l).unwrap();
        prop_assert_eq!(act.c, Q::one());
        prop_assert_eq!(act.m, 1);
    }
}
