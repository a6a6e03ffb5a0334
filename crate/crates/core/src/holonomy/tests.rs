use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::jets::Jet;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn linear_model(alpha: Complex64) -> HolonomyField {
    HolonomyField::diagonal_model(Poly2::constant(alpha))
}

/// `F = z(z − 1)`, `G = 0.3 + 0.35z + y`, ramified by `r`.
fn two_point_field(r: u32) -> HolonomyField {
    HolonomyField {
        g: Poly2::new(vec![(0, 0, c(0.3, 0.0)), (1, 0, c(0.35, 0.0)), (0, 1, c(1.0, 0.0))]),
        f: Poly2::new(vec![(2, 0, c(1.0, 0.0)), (1, 0, c(-1.0, 0.0))]),
        r,
    }
}

const SAMPLES: [f64; 3] = [1e-3, 4e-3, 1e-2];

fn around_zero() -> Loop {
    Loop::circle(c(0.0, 0.0), 0.5, 0.0, 1.0)
}

fn around_one() -> Loop {
    Loop::circle(c(1.0, 0.0), 0.5, PI, 1.0)
}

#[test]
fn linear_model_multiplier() {
    let alpha = c(0.37, -0.21);
    let h = holonomy_map(&linear_model(alpha), &Loop::circle(c(0.0, 0.0), 1.0, 0.0, 1.0), &HolonomyOptions::default()).unwrap();
    let expected = (c(0.0, 2.0 * PI) * alpha).exp();
    assert!((h.multiplier - expected).norm() < 1e-8, "{}", h.multiplier);
    assert!(h.diagnostics.multiplier_gap < 1e-8);
    // the map is linear on the fit disc
    for y in SAMPLES {
        let y = c(y, 0.0);
        assert!((h.eval(y) - expected * y).norm() / y.norm() < 1e-10);
    }
}

#[test]
fn constant_loop_is_identity() {
    let h = holonomy_map(&two_point_field(1), &Loop::constant(c(0.5, 0.0)), &HolonomyOptions::default()).unwrap();
    assert!((h.multiplier - c(1.0, 0.0)).norm() < 1e-10);
    for k in 2..=h.jet.order() {
        assert!(h.coefficient(k).norm() < 1e-10);
    }
    assert_eq!(tangency_order(&h, 1e-8).unwrap(), None);
}

#[test]
fn loop_through_singularity_is_rejected() {
    let err = holonomy_map(&two_point_field(1), &Loop::circle(c(0.5, 0.0), 0.5, 0.0, 1.0), &HolonomyOptions::default());
    assert!(matches!(err, Err(HolonomyError::FVanishes(_))));
}

#[test]
fn open_paths_are_rejected() {
    let seg = Segment::Line { from: c(0.0, 1.0), to: c(1.0, 1.0) };
    assert!(matches!(Loop::new(vec![seg]), Err(HolonomyError::NotClosed(_))));
    let back = seg.reversed();
    assert!(Loop::new(vec![seg, back]).is_ok());
}

#[test]
fn composition_convention() {
    // h_{a·b} = h_b ∘ h_a
    let field = two_point_field(1);
    let opts = HolonomyOptions::default();
    let (a, b) = (around_zero(), around_one());
    let ha = holonomy_map(&field, &a, &opts).unwrap();
    let hb = holonomy_map(&field, &b, &opts).unwrap();
    let hab = holonomy_map(&field, &a.then(&b).unwrap(), &opts).unwrap();
    let composed = ha.then(&hb);
    let wrong = hb.then(&ha);
    for y in SAMPLES {
        let y = c(y, 0.0);
        let d = (composed.eval(&[y]) - hab.eval(y)).norm() / y.norm();
        assert!(d < 1e-7, "y = {y}: {d}");
        // the opposite order is measurably different
        assert!((wrong.eval(&[y]) - hab.eval(y)).norm() / y.norm() > 1e-4);
    }
}

#[test]
fn commutator_is_tangent_with_nonzero_higher_jet() {
    let field = two_point_field(1);
    let opts = HolonomyOptions::default();
    let (a, b) = (around_zero(), around_one());
    let comm = Loop::commutator(&a, &b).unwrap();
    let h = holonomy_map(&field, &comm, &opts).unwrap();
    assert!((h.multiplier - c(1.0, 0.0)).norm() < 1e-6);
    assert!(h.coefficient(2).norm() > 1e-3);
    assert_eq!(tangency_order(&h, 1e-5).unwrap(), Some(2));

    // oracle: compose the four separately integrated maps
    let ha = holonomy_map(&field, &a, &opts).unwrap();
    let hb = holonomy_map(&field, &b, &opts).unwrap();
    let hai = holonomy_map(&field, &a.inverse(), &opts).unwrap();
    let hbi = holonomy_map(&field, &b.inverse(), &opts).unwrap();
    let step1 = ha.then(&hb);
    let step2 = hai.jet.compose(&[step1]).unwrap();
    let step3 = hbi.jet.compose(&[step2]).unwrap();
    assert!((step3.coeff(&[2]) - h.coefficient(2)).norm() < 1e-6);
    for y in SAMPLES {
        let y = c(y, 0.0);
        let d = (step3.eval(&[y]) - h.eval(y)).norm() / y.norm();
        assert!(d < 1e-7, "y = {y}: {d}");
    }
}

#[test]
fn ramified_commutator_skips_even_degrees() {
    let opts = HolonomyOptions::default();
    let comm = Loop::commutator(&around_zero(), &around_one()).unwrap();
    let h2 = holonomy_map(&two_point_field(2), &comm, &opts).unwrap();
    assert!(ramification_check(&h2, 2, 1e-7));
    assert_eq!(tangency_order(&h2, 1e-5).unwrap(), Some(3));
    let h1 = holonomy_map(&two_point_field(1), &comm, &opts).unwrap();
    assert!(!ramification_check(&h1, 2, 1e-7));
}

#[test]
fn tangency_of_synthetic_maps() {
    let mk = |terms: &[(u32, f64)]| {
        let mut jet = Jet::zero(1, 6);
        for &(k, v) in terms {
            jet.set_coeff(&[k], c(v, 0.0));
        }
        HolonomyMap {
            multiplier: jet.coeff(&[1]),
            integral_multiplier: jet.coeff(&[1]),
            jet,
            radius: 1e-2,
            uncertainty: Vec::new(),
            diagnostics: HolonomyDiagnostics::default(),
        }
    };
    assert_eq!(tangency_order(&mk(&[(1, 1.0)]), 1e-9).unwrap(), None);
    assert_eq!(tangency_order(&mk(&[(1, 1.0), (3, 1.0)]), 1e-9).unwrap(), Some(3));
    assert!(matches!(tangency_order(&mk(&[(1, 2.0)]), 1e-9), Err(HolonomyError::NotTangent(_))));
}

/// x' = x(1 + x²)·γ'/γ has the first integral x²/(1 + x²)·γ⁻², so the
/// holonomy around 0 is the identity; fit noise must not fake a tangency.
#[test]
fn noisy_high_coefficients_do_not_count() {
    let field = HolonomyField {
        g: Poly2::new(vec![(0, 0, c(1.0, 0.0)), (0, 1, c(1.0, 0.0))]),
        f: Poly2::new(vec![(1, 0, c(1.0, 0.0))]),
        r: 2,
    };
    let h = holonomy_map(&field, &around_zero(), &HolonomyOptions::default()).unwrap();
    assert!((h.multiplier - c(1.0, 0.0)).norm() < 1e-9);
    assert_eq!(tangency_order(&h, 1e-6).unwrap(), None);
    for k in 2..=8 {
        assert!(h.coefficient(k).norm() <= 5.0 * h.uncertainty[k] + 1e-9, "a_{k} = {}", h.coefficient(k));
    }
}

#[test]
fn homotopic_loops_agree() {
    let field = two_point_field(1);
    let opts = HolonomyOptions::default();
    let small = Loop::circle(c(0.0, 0.0), 0.5, 0.0, 1.0);
    let detour = Loop::new(vec![
        Segment::Line { from: c(0.5, 0.0), to: c(0.0, 0.7) },
        Segment::Circle { center: c(0.0, 0.0), radius: 0.7, theta0: PI / 2.0, turns: 1.0 },
        Segment::Line { from: c(0.0, 0.7), to: c(0.5, 0.0) },
    ])
    .unwrap();
    let h1 = holonomy_map(&field, &small, &opts).unwrap();
    let h2 = holonomy_map(&field, &detour, &opts).unwrap();
    for y in SAMPLES {
        let y = c(y, 0.0);
        assert!((h1.eval(y) - h2.eval(y)).norm() / y.norm() < 1e-7);
    }
}

#[test]
fn transport_matches_closed_form() {
    // dx/dz = x·α/z has x(θ) = x₀e^{iαθ}
    let alpha = c(0.25, 0.1);
    let (x1, st) = transport(&linear_model(alpha), &Loop::circle(c(0.0, 0.0), 2.0, 0.3, 1.0), c(1e-3, 0.0), StepControl::default()).unwrap();
    let exact = c(1e-3, 0.0) * (c(0.0, 2.0 * PI) * alpha).exp();
    assert!((x1 - exact).norm() < 1e-14);
    assert!(st.steps > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn linear_multiplier_random(re in -2.0f64..2.0, im in -0.3f64..0.3) {
        let alpha = c(re, im);
        let h = holonomy_map(&linear_model(alpha), &Loop::circle(c(0.0, 0.0), 1.0, 0.0, 1.0), &HolonomyOptions::default()).unwrap();
        let expected = (c(0.0, 2.0 * PI) * alpha).exp();
        prop_assert!((h.multiplier - expected).norm() < 1e-8);
    }

    #[test]
    fn fitted_multiplier_matches_integral(g1 in -0.5f64..0.5, g2 in -0.5f64..0.5) {
        let mut field = two_point_field(1);
        field.g.terms.push((2, 0, c(g1, g2)));
        let h = holonomy_map(&field, &around_one(), &HolonomyOptions::default()).unwrap();
        prop_assert!(h.diagnostics.multiplier_gap < 1e-8, "{}", h.diagnostics.multiplier_gap);
    }
}


