use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::calculus::{integrability_check, DiffeoJet, PForm, VectorField};
use crate::coeff::{CycloCtx, Cyclotomic, Field, GaussianRational};
use crate::germdiff::flow_at;
use crate::holonomy::{holonomy_map, HolonomyField, HolonomyOptions, Loop, Poly2};
use crate::jets::{default_var_names, Jet};
use crate::logforms::{closedness_residual, fix_test, is_conical, iso_cofactor, residue_action, FixHints, FixVerdict, LogForm, Membership};
use crate::rigidity::isotropy_lie_algebra;

use super::{proportionality, CatalogError, Scenario};

type Q = BigRational;
type G = GaussianRational;

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn poly<F: Field>(n: usize, order: usize, terms: &[(&[u32], F)]) -> Jet<F> {
    Jet::from_terms(n, order, terms.iter().map(|(e, c)| (*e, c.clone())))
}

fn verdict_text<F: Field>(m: &Membership<F>) -> String {
    match m {
        Membership::Yes { cofactor, order } => format!("cofactor {} to order {order}", cofactor),
        Membership::No { degree, .. } => format!("fails in degree {degree}"),
        Membership::Unknown => "form vanishes to the effective order".into(),
    }
}

pub fn build_named(id: &str) -> Result<super::Scenario, CatalogError> {
    match id {
        "regular" => regular(),
        "flow-tangent" => flow_tangent(),
        "homogeneous" => homogeneous(),
        "logarithmic" => logarithmic(),
        "wedge-product" => wedge_product(),
        "delta-cycle" => delta_cycle(),
        "rigid-log" => rigid_log(),
        "four-branch" => four_branch(),
        _ => Err(CatalogError::UnknownId(id.to_string())),
    }
}

/// `Ω = v·dz₁` with `v(0) ≠ 0`: `φ ∈ Iso` iff `φ₁` depends on `z₁` only.
fn regular() -> Result<Scenario, CatalogError> {
    let (n, order) = (3, 4);
    let vars = default_var_names(n);
    let mut s = Scenario::new("regular", "regular foliation v·dx", "rational");
    let v = poly::<Q>(n, order, &[(&[0, 0, 0], qi(1)), (&[0, 1, 0], qi(1)), (&[1, 0, 1], qi(1))]);
    let omega = PForm::dz(n, order, 0).mul_function(&v);
    s.object("Omega", omega.to_text_with(&vars));
    let good = DiffeoJet::new(vec![
        poly(n, order, &[(&[1, 0, 0], qi(1)), (&[2, 0, 0], qi(1))]),
        poly(n, order, &[(&[0, 1, 0], qi(1)), (&[1, 0, 1], qi(1))]),
        poly(n, order, &[(&[0, 0, 1], qi(1)), (&[0, 2, 0], qi(1))]),
    ])?;
    let bad = DiffeoJet::new(vec![
        poly(n, order, &[(&[1, 0, 0], qi(1)), (&[0, 2, 0], qi(1))]),
        Jet::var(n, order, 1),
        Jet::var(n, order, 2),
    ])?;
    s.object("phi", good.to_text_with(&vars));
    s.object("psi", bad.to_text_with(&vars));
    for (key, phi, expect) in [("phi-in-iso", &good, true), ("psi-not-in-iso", &bad, false)] {
        let depends_only_on_first = (1..n).all(|j| phi.component(0).derivative(j).is_zero());
        let m = iso_cofactor(phi, &omega)?;
        let member = matches!(m, Membership::Yes { .. });
        s.check(
            key,
            if expect { "φ₁ = φ₁(x) and φ ∈ Iso" } else { "ψ₁ depends on y and ψ ∉ Iso" },
            member == expect && depends_only_on_first == expect,
            verdict_text(&m),
        );
    }
    s.assume("every element of Iso has a first component depending on x only (proved by Frobenius)");
    Ok(s)
}

/// `ω = X₁dy − X₂dx` is tangent to `X`; the time-½ flow is in Fix.
fn flow_tangent() -> Result<Scenario, CatalogError> {
    let (n, order) = (2, 6);
    let vars = default_var_names(n);
    let mut s = Scenario::new("flow-tangent", "flow of a tangent vector field", "rational");
    let x = VectorField::new(vec![
        poly::<Q>(n, order, &[(&[2, 0], qi(1)), (&[0, 3], qi(1))]),
        poly(n, order, &[(&[1, 1], qi(1))]),
    ])?;
    let omega = PForm::one_form(vec![-x.component(1), x.component(0).clone()]);
    s.object("X", x.to_text_with(&vars));
    s.object("omega", omega.to_text_with(&vars));
    s.check("tangent", "i_X ω = 0", omega.interior(&x)?.is_zero(), "");
    s.check("integrable", "ω ∧ dω = 0", integrability_check(&omega, None)?.integrable, "");
    let half = Q::new(1.into(), 2.into());
    let phi = flow_at(&x, &half)?;
    s.object("Phi", phi.to_text_with(&vars));
    let m = iso_cofactor(&phi, &omega)?;
    s.check("flow-in-iso", "exp(X/2) ∈ Iso(ω)", matches!(m, Membership::Yes { .. }), verdict_text(&m));
    let fix = fix_test(&phi, &omega, FixHints::default())?;
    s.check("flow-in-fix", "fix test answers yes", fix.verdict == FixVerdict::Yes, fix.reason);
    Ok(s)
}

/// Dilations preserve homogeneous forms; they fix the leaves iff `i_Rω = 0`.
fn homogeneous() -> Result<Scenario, CatalogError> {
    let (n, order) = (2, 4);
    let vars = default_var_names(n);
    let mut s = Scenario::new("homogeneous", "dilations of homogeneous forms", "rational");
    let x = Jet::<Q>::var(n, order, 0);
    let y = Jet::<Q>::var(n, order, 1);
    let omega = PForm::one_form(vec![y.clone(), x.scale(&qi(2))]);
    let conical = PForm::one_form(vec![y.clone(), -&x]);
    s.object("omega", omega.to_text_with(&vars));
    s.object("omega_conical", conical.to_text_with(&vars));
    let radial = VectorField::radial(n, order);
    let lie = omega.lie(&radial)?;
    s.check("euler", "L_R ω = (d + p)·ω with d = p = 1", lie.agrees_with(&omega.scale(&qi(2)).with_order(lie.order())), "");
    let rho = qi(3);
    let h = DiffeoJet::scalar(n, order + 1, rho.clone())?;
    let c = proportionality(&h.pullback(&omega)?, &omega);
    s.check("dilation", "h_3*ω = 3²·ω", c == Some(qi(9)), format!("{c:?}"));
    s.check("not-conical", "i_R ω ≠ 0", !omega.interior(&radial)?.is_zero(), "");
    s.check("conical", "y dx − x dy is conical", is_conical(&conical), "");
    let fix_c = fix_test(&h, &conical, FixHints::default())?;
    s.check("conical-fix", "h_3 fixes the leaves of the conical form", fix_c.verdict == FixVerdict::Yes, fix_c.reason);
    // x·y² is a first integral and h_3 multiplies it by 27, so leaves move
    let first = Jet::monomial(n, order, &[1, 2], qi(1));
    let tangent = PForm::function(first.clone()).d().wedge(&omega)?.is_zero();
    let moved = first.compose(&[h.component(0).clone(), h.component(1).clone()])?;
    s.check(
        "non-conical-fix",
        "x·y² is a first integral of y dx + 2x dy and h_3 scales it by 27",
        tangent && moved.agrees_with(&first.scale(&qi(27))),
        "",
    );
    let fix_n = fix_test(&h, &omega, FixHints::default())?;
    s.value("non_conical_fix_verdict", format!("{:?}", fix_n.verdict));
    Ok(s)
}

/// `xy·(dx/x + i·dy/y)`; its holonomy multiplier is `e^{−2πi·λ₂/λ₁}`.
fn logarithmic() -> Result<Scenario, CatalogError> {
    let (n, order) = (2, 4);
    let vars = default_var_names(n);
    let mut s = Scenario::new("logarithmic", "logarithmic form with residues 1 and i", "gaussian");
    let lambda = [G::one(), G::i()];
    let l = LogForm::logarithmic(vec![
        (lambda[0].clone(), Jet::var(n, order, 0)),
        (lambda[1].clone(), Jet::var(n, order, 1)),
    ])?;
    let omega = l.clear_denominators();
    s.object("Omega", omega.to_text_with(&vars));
    let expected = PForm::one_form(vec![Jet::var(n, omega.order(), 1), Jet::var(n, omega.order(), 0).scale(&G::i())]);
    s.check("cleared", "xy·L = y dx + i x dy", omega.agrees_with(&expected), "");
    let xy = &Jet::<G>::var(n, order, 0) * &Jet::var(n, order, 1);
    s.check("closed", "d(Ω/(xy)) = 0", closedness_residual(&omega, &xy).is_zero(), "");
    s.check("independent", "no rational relation between the residues", l.residue_relation().is_none(), "");
    // leaf x = 0 parametrised by y = z, transversal x: dx/dz = −(λ₂/λ₁)·x/z
    let ratio = Complex64::new(0.0, 1.0);
    let field = HolonomyField {
        g: Poly2::constant(-ratio),
        f: Poly2::new(vec![(1, 0, Complex64::new(1.0, 0.0))]),
        r: 1,
    };
    let h = holonomy_map(&field, &Loop::circle(Complex64::new(0.0, 0.0), 1.0, 0.0, 1.0), &HolonomyOptions::default())?;
    let target = (Complex64::new(0.0, -2.0 * PI) * ratio).exp();
    let rel = (h.multiplier - target).norm() / target.norm();
    s.check("holonomy", "holonomy multiplier is e^{−2πi·λ₂/λ₁}", rel < 1e-8, format!("relative error {rel:.1e}"));
    s.value("multiplier", h.multiplier);
    s.assume("H/(H ∩ Fix) is isomorphic to C*/G with G generated by the holonomy multipliers");
    Ok(s)
}

/// `η = ω ∧ Φ*ω` for an involution `Φ ∉ Iso(ω)`, and a product example.
fn wedge_product() -> Result<Scenario, CatalogError> {
    let (n, order) = (3, 4);
    let vars = default_var_names(n);
    let mut s = Scenario::new("wedge-product", "wedge products of integrable forms", "rational");
    // ω = d(x + yz)
    let f = poly::<Q>(n, order + 1, &[(&[1, 0, 0], qi(1)), (&[0, 1, 1], qi(1))]);
    let omega = PForm::function(f).d().with_order(order);
    let phi = DiffeoJet::new(vec![Jet::var(n, order, 1), Jet::var(n, order, 0), Jet::var(n, order, 2)])?;
    s.object("omega", omega.to_text_with(&vars));
    s.object("Phi", phi.to_text_with(&vars));
    s.check("involution", "Φ∘Φ = id", phi.compose(&phi)?.is_identity(), "");
    s.check("integrable", "ω ∧ dω = 0", integrability_check(&omega, None)?.integrable, "");
    let m = iso_cofactor(&phi, &omega)?;
    s.check("not-iso", "Φ ∉ Iso(ω)", matches!(m, Membership::No { .. }), verdict_text(&m));
    let pulled = phi.pullback(&omega)?;
    let eta = omega.wedge(&pulled)?;
    s.object("eta", eta.to_text_with(&vars));
    s.check("eta-nonzero", "η = ω ∧ Φ*ω ≠ 0", !eta.is_zero(), "");
    let c = proportionality(&phi.pullback(&eta)?, &eta);
    s.check("eta-iso", "Φ*η = −η", c == Some(qi(-1)), format!("{c:?}"));

    // ω₁ = z₁dz₂ + d(z₁³ + z₁z₂), ω₂ = z₃dz₄ + d(z₄³ + z₃z₄) on C⁴
    let (n4, o4) = (4, 4);
    let vars4 = default_var_names(n4);
    let part = |a: usize, b: usize, g: Jet<Q>| {
        let za = Jet::var(n4, o4, a);
        &PForm::dz(n4, o4, b).mul_function(&za) + &PForm::function(g).d().with_order(o4)
    };
    let w1 = part(0, 1, poly(n4, o4 + 1, &[(&[3, 0, 0, 0], qi(1)), (&[1, 1, 0, 0], qi(1))]));
    let w2 = part(2, 3, poly(n4, o4 + 1, &[(&[0, 0, 0, 3], qi(1)), (&[0, 0, 1, 1], qi(1))]));
    let eta4 = w1.wedge(&w2)?;
    s.object("omega1", w1.to_text_with(&vars4));
    s.object("omega2", w2.to_text_with(&vars4));
    let rep = integrability_check(&eta4, Some(&[w1.clone(), w2.clone()]))?;
    s.check("product-integrable", "dω_j ∧ η = 0 for both factors", rep.integrable, "");
    // quasi-homogeneous dilations (2z₁, 4z₂) and (9z₃, 3z₄)
    let diag = [qi(2), qi(4), qi(9), qi(3)];
    let t: Vec<Vec<Q>> = (0..4).map(|i| (0..4).map(|k| if i == k { diag[i].clone() } else { qi(0) }).collect()).collect();
    let prod = DiffeoJet::linear(&t, o4 + 2)?;
    let c1 = proportionality(&prod.pullback(&w1)?, &w1);
    let c2 = proportionality(&prod.pullback(&w2)?, &w2);
    let ce = proportionality(&prod.pullback(&eta4)?, &eta4);
    s.check("factors-iso", "the product map preserves ω₁ and ω₂", c1 == Some(qi(8)) && c2 == Some(qi(27)), format!("{c1:?}, {c2:?}"));
    s.check("product-iso", "the product map lies in Iso(η)", ce == Some(qi(216)), format!("{ce:?}"));
    s.assume("Iso(η) equals the intersection of Iso(ω_j) under the non-mixing hypotheses");
    s.assume("Φ ∉ Fix(η)");
    Ok(s)
}

/// `dx/x + δ dy/y + δ² dz/z` and the cyclic permutation `(z, x, y)`.
fn delta_cycle() -> Result<Scenario, CatalogError> {
    let (n, order) = (3, 4);
    let vars = default_var_names(n);
    let ctx = CycloCtx::new(3);
    let delta = Cyclotomic::zeta(&ctx);
    let mut s = Scenario::new("delta-cycle", "cyclic permutation of a logarithmic form", "cyclotomic:3");
    let l = LogForm::logarithmic(vec![
        (Cyclotomic::one(), Jet::var(n, order, 0)),
        (delta.clone(), Jet::var(n, order, 1)),
        (delta.clone() * delta.clone(), Jet::var(n, order, 2)),
    ])?;
    let phi = DiffeoJet::new(vec![Jet::var(n, order, 2), Jet::var(n, order, 0), Jet::var(n, order, 1)])?;
    let hol = l.clear_denominators();
    s.object("Omega", hol.to_text_with(&vars));
    s.object("Phi", phi.to_text_with(&vars));
    let act = residue_action(&phi, &l)?;
    let is_three_cycle = act.m == 3 && act.sigma.iter().enumerate().all(|(i, &j)| i != j);
    s.check("three-cycle", "Φ permutes the branches in a 3-cycle", is_three_cycle, format!("σ = {:?}", act.sigma));
    s.check("constant", "C = ζ₃ and C³ = 1", act.c == delta && act.c_pow_m_is_one, act.c.to_text());
    let c = proportionality(&phi.pullback(&hol)?, &hol);
    s.check("pullback", "Φ*Ω = δ·Ω", c.as_ref() == Some(&delta), c.map(|c| c.to_text()).unwrap_or_default());
    s.value("sigma", format!("{:?}", act.sigma));
    s.value("c", act.c.to_text());
    s.value("m", act.m);
    Ok(s)
}

fn initial_jets<F: Field>(l: &LogForm<F>) -> Vec<Jet<F>> {
    l.branches
        .iter()
        .map(|b| {
            let v = b.f.valuation().unwrap_or(0);
            b.f.homogeneous(v)
        })
        .collect()
}

/// `df₁/f₁ + i·df₂/f₂` with initial jets `x·y²` and `x + y`.
fn rigid_log() -> Result<Scenario, CatalogError> {
    let (n, order) = (2, 6);
    let vars = default_var_names(n);
    let mut s = Scenario::new("rigid-log", "logarithmic form with rigid initial jets", "gaussian");
    let f1 = poly::<G>(n, order, &[(&[1, 2], G::one()), (&[4, 0], G::one()), (&[0, 5], G::one())]);
    let f2 = poly::<G>(n, order, &[(&[1, 0], G::one()), (&[0, 1], G::one()), (&[2, 0], G::one())]);
    let l = LogForm::logarithmic(vec![(G::one(), f1.clone()), (G::i(), f2.clone())])?;
    s.object("f1", f1.to_text_with(&vars));
    s.object("f2", f2.to_text_with(&vars));
    let h = initial_jets(&l);
    let rep = isotropy_lie_algebra(&h)?;
    s.check("rigid", "the initial jets (x·y², x + y) are infinitesimally rigid", rep.rigid_infinitesimal, format!("dimension {}", rep.dimension));
    s.check("rigid-search", "no permutation symmetry of the initial jets", rep.rigid_with_search(), "");
    s.check("independent", "λ = i is not rational", l.residue_relation().is_none(), "");
    let denom = &f1 * &f2;
    s.check("closed", "d(Ω/(f₁f₂)) = 0", closedness_residual(&l.clear_denominators(), &denom.with_order(order - 1)).is_zero(), "");
    s.value("isotropy_dimension", rep.dimension);
    s.assume("f₁ is irreducible");
    s.assume("Iso = Fix for this form (needs the absence of a meromorphic first integral)");
    Ok(s)
}

/// Residues `1, i, 1+i, 1+2i` on `z₁²+z₂³, z₁, z₃, z₁+z₂`.
fn four_branch() -> Result<Scenario, CatalogError> {
    let (n, order) = (3, 5);
    let vars = default_var_names(n);
    let mut s = Scenario::new("four-branch", "four-branch logarithmic form", "gaussian");
    let fs = [poly::<G>(n, order, &[(&[2, 0, 0], G::one()), (&[0, 3, 0], G::one())]),
        Jet::var(n, order, 0),
        Jet::var(n, order, 2),
        poly(n, order, &[(&[1, 0, 0], G::one()), (&[0, 1, 0], G::one())])];
    let lambdas = [G::one(), G::i(), G::from_ints(1, 1), G::from_ints(1, 2)];
    let l = LogForm::logarithmic(lambdas.iter().cloned().zip(fs.iter().cloned()).collect())?;
    for (j, f) in fs.iter().enumerate() {
        s.object(&format!("f{}", j + 1), f.to_text_with(&vars));
    }
    s.check("independent", "no two residues have a rational ratio", l.residue_relation().is_none(), "");
    let denom = fs.iter().fold(Jet::one(n, order), |acc, f| &acc * f);
    s.check("closed", "d(Ω/∏f_j) = 0", closedness_residual(&l.clear_denominators(), &denom.with_order(order - 1)).is_zero(), "");
    let rep = isotropy_lie_algebra(&initial_jets(&l))?;
    s.check("not-rigid", "the initial jets have a 3-dimensional isotropy algebra", rep.dimension == 3 && !rep.rigid_infinitesimal, format!("dimension {}", rep.dimension));
    s.value("isotropy_dimension", rep.dimension);
    s.assume("Iso = Fix for this form; rigidity of the initial jets does not apply, so this is not derived here");
    Ok(s)
}
