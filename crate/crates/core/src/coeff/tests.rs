use super::*;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn cyc(m: u64, cs: &[(i64, i64)]) -> Cyclotomic {
    let ctx = CycloCtx::new(m);
    Cyclotomic::from_coeffs(&ctx, cs.iter().map(|&(n, d)| q(n, d)).collect())
}

#[test]
fn cyclotomic_polynomials_small() {
    let as_i64 = |m| -> Vec<i64> {
        cyclotomic_polynomial(m)
            .into_iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    };
    assert_eq!(as_i64(1), vec![-1, 1]);
    assert_eq!(as_i64(3), vec![1, 1, 1]);
    assert_eq!(as_i64(4), vec![1, 0, 1]);
    assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
    // Φ_105 is the first with a coefficient of modulus 2
    assert!(cyclotomic_polynomial(105).contains(&BigInt::from(-2)));
    for m in 1..60 {
        assert_eq!(cyclotomic_polynomial(m).len() as u64 - 1, euler_phi(m));
    }
}

#[test]
fn order_examples() {
    assert_eq!(root_of_unity_order(&GaussianRational::one()), Ok(Some(1)));
    let z3 = Cyclotomic::zeta(&CycloCtx::new(3));
    assert_eq!(root_of_unity_order(&z3), Ok(Some(3)));
    let half = GaussianRational::from_rational(&q(1, 2));
    assert_eq!(root_of_unity_order(&half), Ok(None));
    assert_eq!(root_of_unity_order(&GaussianRational::i()), Ok(Some(4)));
    assert_eq!(
        root_of_unity_order(&GaussianRational::zero()),
        Err(CoeffError::ZeroInput)
    );
}

#[test]
fn order_of_negated_zeta() {
    // -ζ_3 is a primitive 6th root of unity
    let ctx = CycloCtx::new(3);
    let w = -Cyclotomic::zeta(&ctx);
    assert_eq!(root_of_unity_order(&w), Ok(Some(6)));
    let ctx5 = CycloCtx::new(5);
    assert_eq!(root_of_unity_order(&-Cyclotomic::one()), Ok(Some(2)));
    assert_eq!(root_of_unity_order(&-Cyclotomic::zeta(&ctx5)), Ok(Some(10)));
    assert_eq!(root_of_unity_order(&cyc(5, &[(1, 1), (1, 1)])), Ok(None));
}

#[test]
fn order_formula_all_m_up_to_24() {
    for m in 1..=24u64 {
        let ctx = CycloCtx::new(m);
        for j in 0..m {
            let z = Cyclotomic::zeta_pow(&ctx, j as i64);
            assert_eq!(
                root_of_unity_order(&z),
                Ok(Some(m / j.gcd(&m))),
                "zeta_{}^{}",
                m,
                j
            );
        }
    }
}

#[test]
fn float_order() {
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 7.0);
    assert_eq!(root_of_unity_order(&w), Ok(Some(7)));
    assert_eq!(root_of_unity_order(&Complex64::new(0.5, 0.0)), Ok(None));
    assert_eq!(
        root_of_unity_order(&Complex64::new(1e10, 0.0)),
        Err(CoeffError::FloatOverflow(31))
    );
}

#[test]
fn embed_examples() {
    let i = Scalar::Gaussian(GaussianRational::i());
    let z4 = Scalar::Cyclotomic(Cyclotomic::zeta(&CycloCtx::new(4)));
    assert_eq!(i.embed(4).unwrap(), z4);
    let z3 = Scalar::Cyclotomic(Cyclotomic::zeta(&CycloCtx::new(3)));
    let z12_4 = Scalar::Cyclotomic(Cyclotomic::zeta_pow(&CycloCtx::new(12), 4));
    assert_eq!(z3.embed(12).unwrap(), z12_4);
    assert!(matches!(z3.embed(4), Err(CoeffError::NoEmbedding { .. })));
    assert!(i.embed(6).is_err());
}

#[test]
fn mixed_fields_rejected() {
    let a = Scalar::Gaussian(GaussianRational::i());
    let b = Scalar::Float(Complex64::new(1.0, 0.0));
    assert!(matches!(a.try_add(&b), Err(CoeffError::MixedFields(..))));
    let c3 = Scalar::Cyclotomic(Cyclotomic::zeta(&CycloCtx::new(3)));
    let c5 = Scalar::Cyclotomic(Cyclotomic::zeta(&CycloCtx::new(5)));
    assert!(matches!(c3.try_mul(&c5), Err(CoeffError::MixedFields(..))));
}

#[test]
fn text_round_trip_examples() {
    for s in ["3/2-1/5i", "0+1i", "-7+0i", "poly(12; 1,0,-1/3,2)", "0.5-2j", "1e-12+3.25j"] {
        let v: Scalar = s.parse().unwrap();
        let back: Scalar = v.to_string().parse().unwrap();
        assert_eq!(v, back, "{}", s);
    }
    assert_eq!(
        "2i".parse::<GaussianRational>().unwrap(),
        GaussianRational::from_ints(0, 2)
    );
    assert_eq!(GaussianRational::from_ints(1, -1).to_string(), "1-1i");
}

#[test]
fn nth_roots() {
    let m4 = GaussianRational::from_ints(-4, 0);
    let r = m4.nth_root(2).unwrap();
    assert_eq!(r.clone() * r, m4);
    let ctx = CycloCtx::new(7);
    let z = Cyclotomic::zeta_pow(&ctx, 3);
    let r = z.nth_root(2).unwrap();
    assert_eq!(r.pow_i(2), z);
}

fn arb_gauss() -> impl Strategy<Value = GaussianRational> {
    (-20i64..20, 1i64..9, -20i64..20, 1i64..9)
        .prop_map(|(a, b, c, d)| GaussianRational::new(q(a, b), q(c, d)))
}

fn arb_cyc(m: u64) -> impl Strategy<Value = Cyclotomic> {
    let n = euler_phi(m) as usize;
    proptest::collection::vec((-9i64..9, 1i64..5), n).prop_map(move |cs| {
        let ctx = CycloCtx::new(m);
        Cyclotomic::from_coeffs(&ctx, cs.into_iter().map(|(a, b)| q(a, b)).collect())
    })
}

fn axioms<F: Field>(a: F, b: F, c: F) {
    assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
    assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
    assert_eq!(
        a.clone() * (b.clone() + c.clone()),
        a.clone() * b.clone() + a.clone() * c.clone()
    );
    assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
    if let Some(ai) = a.inv() {
        assert_eq!(a * ai, F::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gaussian_field_axioms(a in arb_gauss(), b in arb_gauss(), c in arb_gauss()) {
        axioms(a, b, c);
    }

    #[test]
    fn cyclotomic_field_axioms(a in arb_cyc(12), b in arb_cyc(12), c in arb_cyc(12)) {
        axioms(a, b, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cyclotomic_axioms_prime(a in arb_cyc(7), b in arb_cyc(7), c in arb_cyc(7)) {
        axioms(a, b, c);
    }

    #[test]
    fn embed_is_ring_hom(a in arb_cyc(6), b in arb_cyc(6)) {
        let t = CycloCtx::new(18);
        let ea = a.embed(&t).unwrap();
        let eb = b.embed(&t).unwrap();
        prop_assert_eq!((a.clone() + b.clone()).embed(&t).unwrap(), ea.clone() + eb.clone());
        prop_assert_eq!((a * b).embed(&t).unwrap(), ea * eb);
    }

    #[test]
    fn gaussian_embed_is_ring_hom(a in arb_gauss(), b in arb_gauss()) {
        let sa = Scalar::Gaussian(a.clone());
        let sb = Scalar::Gaussian(b.clone());
        let prod = Scalar::Gaussian(a * b);
        let lhs = prod.embed(8).unwrap();
        let rhs = sa.embed(8).unwrap().try_mul(&sb.embed(8).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_text_round_trip(a in arb_gauss(), c in arb_cyc(9), re in -1e6f64..1e6, im in -1e6f64..1e6) {
        for s in [Scalar::Gaussian(a), Scalar::Cyclotomic(c), Scalar::Float(Complex64::new(re, im))] {
            let back: Scalar = s.to_string().parse().unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
