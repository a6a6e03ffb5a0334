use super::*;

#[test]
fn every_listed_scenario_verifies() {
    for (id, _) in list() {
        let s = build(id, 360).unwrap_or_else(|e| panic!("{id}: {e}"));
        for line in s.transcript() {
            println!("{id}: {line}");
        }
        assert!(s.all_passed(), "{id} has failing facts");
        assert!(!s.facts.is_empty());
    }
}

#[test]
fn unknown_id_is_an_error() {
    assert!(matches!(build("nope", 360), Err(CatalogError::UnknownId(_))));
    assert!(matches!(build("jouanolou-x-2", 360), Err(CatalogError::UnknownId(_))));
}

#[test]
fn jouanolou_two_two() {
    let s = build_jouanolou(2, 2, 360).unwrap();
    assert_eq!(s.values["D"], "7");
    assert_eq!(s.values["group_order"], "21");
    assert!(s.fact("conical").unwrap().passed);
    assert!(s.fact("integrable").unwrap().passed);
    assert!(s.fact("tau-order").unwrap().passed);
    assert!(s.fact("tau-monomials").unwrap().passed);
}

#[test]
fn jouanolou_other_parameters() {
    // D = 13 and D = 15
    for (n, d, big_d) in [(2, 3, 13u64), (3, 2, 15)] {
        let s = build_jouanolou(n, d, 360).unwrap();
        assert_eq!(s.values["D"], big_d.to_string());
        assert!(s.all_passed(), "{:?}", s.transcript());
        assert_eq!(s.values["group_order"], (big_d as usize * (n + 1)).to_string());
    }
}

#[test]
fn jouanolou_respects_cyclotomic_bound() {
    assert!(matches!(build_jouanolou(2, 2, 6), Err(CatalogError::CyclotomicBound { d: 7, bound: 6 })));
    assert!(matches!(build_jouanolou(1, 2, 360), Err(CatalogError::BadParameters(_))));
}

#[test]
fn group_order_oracles_agree() {
    for (n, d) in [(2, 2), (2, 3), (3, 2), (2, 4)] {
        let a = monomial_group_order(n, d, JOUANOLOU_GROUP_BOUND);
        let big_d = ((d as u64).pow(n as u32 + 1) - 1) / (d as u64 - 1);
        assert_eq!(a, Some(big_d as usize * (n + 1)));
    }
    // a single generator of order 5 in PGL₂ over Q(ζ₅)
    let ctx = crate::coeff::CycloCtx::new(5);
    let z = crate::coeff::Cyclotomic::zeta(&ctx);
    let one = crate::coeff::Cyclotomic::constant(crate::testutil::q(1, 1));
    let zero = crate::coeff::Cyclotomic::constant(crate::testutil::q(0, 1));
    let g = vec![vec![z, zero.clone()], vec![zero, one]];
    assert_eq!(projective_closure_order(&[g], 100), Some(5));
}

#[test]
fn delta_cycle_reports_action() {
    let s = build("delta-cycle", 360).unwrap();
    assert_eq!(s.values["m"], "3");
    assert!(s.fact("constant").unwrap().passed);
}

#[test]
fn rigid_log_and_four_branch() {
    let s = build("rigid-log", 360).unwrap();
    assert_eq!(s.values["isotropy_dimension"], "1");
    let s = build("four-branch", 360).unwrap();
    assert_eq!(s.values["isotropy_dimension"], "3");
    assert!(!s.assumptions.is_empty());
}

#[test]
fn scenarios_are_deterministic() {
    for id in ["regular", "delta-cycle", "jouanolou"] {
        assert_eq!(build(id, 360).unwrap(), build(id, 360).unwrap());
    }
}
