use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::calculus::{integrability_check, DiffeoJet, PForm, VectorField};
use crate::coeff::{CycloCtx, Cyclotomic, Field};
use crate::jets::{default_var_names, Jet};
use crate::linalg::{self, Mat};
use crate::rigidity::isotropy_membership;

use super::{proportionality, CatalogError, Scenario};

pub const JOUANOLOU_GROUP_BOUND: usize = 10_000;

type C = Cyclotomic;

fn normalize<F: Field>(m: &Mat<F>) -> Mat<F> {
    let lead = m.iter().flatten().find(|c| !c.is_negligible()).cloned();
    match lead.and_then(|c| c.inv()) {
        Some(inv) => linalg::mat_scale(m, &inv),
        None => m.clone(),
    }
}

fn key<F: Field>(m: &Mat<F>) -> Vec<String> {
    m.iter().flatten().map(|c| c.to_text()).collect()
}

/// Order of the image in PGL of the group generated by `gens`, by breadth
/// first closure; `None` beyond `bound` elements.
pub fn projective_closure_order<F: Field>(gens: &[Mat<F>], bound: usize) -> Option<usize> {
    let n = gens.first().map_or(0, |g| g.len());
    let start = linalg::identity::<F>(n);
    let mut seen = HashSet::from([key(&start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = normalize(&linalg::mat_mul(&m, g));
            if seen.insert(key(&next)) {
                if seen.len() > bound {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(seen.len())
}

/// The same order computed on monomial matrices `(Tz)_i = ζ^{a_i}·z_{p(i)}`
/// with integer exponents mod `D`, without any field arithmetic.
pub fn monomial_group_order(n: usize, d: usize, bound: usize) -> Option<usize> {
    let m = n + 1;
    let big_d = jouanolou_d(n, d)? as i64;
    let e = exponents(n, d);
    type Elt = (Vec<usize>, Vec<i64>);
    let mul = |(p, a): &Elt, (q, b): &Elt| -> Elt {
        let perm: Vec<usize> = (0..m).map(|i| q[p[i]]).collect();
        let exps: Vec<i64> = (0..m).map(|i| a[i] + b[p[i]]).collect();
        let shift = exps[0];
        (perm, exps.iter().map(|x| (x - shift).rem_euclid(big_d)).collect())
    };
    let tau: Elt = ((0..m).collect(), e.iter().map(|&x| x as i64).collect());
    let rho: Elt = ((0..m).map(|i| (i + m - 1) % m).collect(), vec![0; m]);
    let id: Elt = ((0..m).collect(), vec![0; m]);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in [&tau, &rho] {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                if seen.len() > bound {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.len())
}

/// `D = (d^{n+1} − 1)/(d − 1)`.
fn jouanolou_d(n: usize, d: usize) -> Option<u64> {
    let d = d as u64;
    let top = d.checked_pow(n as u32 + 1)?;
    Some((top - 1) / (d - 1))
}

/// `(d^j − 1)/(d − 1)` for `j = 1..n`, then `0`.
fn exponents(n: usize, d: usize) -> Vec<u64> {
    let mut e: Vec<u64> = (1..=n).map(|j| ((d as u64).pow(j as u32) - 1) / (d as u64 - 1)).collect();
    e.push(0);
    e
}

fn zeta_exponent(c: &C, ctx: &Arc<CycloCtx>) -> Option<u64> {
    (0..ctx.m()).find(|&k| (c.clone() - C::zeta_pow(ctx, k as i64)).is_zero())
}

fn mat_text(m: &Mat<C>) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|c| c.to_text()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

/// `Ω = i_R i_X ν` on `ℂ^{n+1}` with `X = Σ_j x_{j−1}^d ∂_j`, indices cyclic.
pub fn build_jouanolou(n: usize, d: usize, max_cyclotomic: u64) -> Result<Scenario, CatalogError> {
    if n < 2 || d < 2 {
        return Err(CatalogError::BadParameters(format!("need n ≥ 2 and d ≥ 2, got n = {n}, d = {d}")));
    }
    let big_d = jouanolou_d(n, d).ok_or(CatalogError::BadParameters("D overflows".into()))?;
    if big_d > max_cyclotomic {
        return Err(CatalogError::CyclotomicBound { d: big_d, bound: max_cyclotomic });
    }
    let ctx = CycloCtx::new(big_d);
    let m = n + 1;
    let order = d + 1;
    let vars = default_var_names(m);
    let mut s = Scenario::new(
        &format!("jouanolou-{n}-{d}"),
        &format!("Jouanolou foliation of degree {d} on P^{n}"),
        &format!("cyclotomic:{big_d}"),
    );
    s.value("D", big_d);

    let x_field = VectorField::new(
        (0..m)
            .map(|j| Jet::<C>::var(m, order, (j + m - 1) % m).pow(d as u32))
            .collect(),
    )?;
    let radial = VectorField::radial(m, order);
    let omega = PForm::volume(m, order).interior(&x_field)?.interior(&radial)?;
    s.object("X", x_field.to_text_with(&vars));
    s.object("Omega", omega.to_text_with(&vars));

    let contracted = omega.interior(&radial)?;
    s.check("conical", "i_R Ω = 0", contracted.is_zero(), "");
    let homogeneous = omega
        .components()
        .all(|(_, f)| f.valuation() == Some(d + 1) && f.degree() == Some(d + 1));
    s.check("homogeneous", "coefficients are homogeneous of degree d + 1", homogeneous, "");
    if omega.degree() == 1 {
        let rep = integrability_check(&omega, None)?;
        s.check("integrable", "Ω ∧ dΩ = 0", rep.integrable, "");
    }

    let e = exponents(n, d);
    let tau: Mat<C> = (0..m)
        .map(|i| (0..m).map(|k| if i == k { C::zeta_pow(&ctx, e[i] as i64) } else { C::zero() }).collect())
        .collect();
    // ρ(x₁, …, x_{n+1}) = (x_{n+1}, x₁, …, x_n)
    let rho: Mat<C> = (0..m)
        .map(|i| (0..m).map(|k| if k == (i + m - 1) % m { C::one() } else { C::zero() }).collect())
        .collect();
    s.object("tau", mat_text(&tau));
    s.object("rho", mat_text(&rho));

    // c = ±ζ^k; the sign is det ρ for odd-length cycles
    for (name, t) in [("tau", &tau), ("rho", &rho)] {
        let pulled = DiffeoJet::linear(t, order + 1)?.pullback(&omega)?;
        let c = proportionality(&pulled, &omega);
        let signed = c.as_ref().and_then(|c| {
            zeta_exponent(c, &ctx)
                .map(|k| ("", k))
                .or_else(|| zeta_exponent(&-c.clone(), &ctx).map(|k| ("-", k)))
        });
        s.check(
            &format!("{name}-proportional"),
            &format!("{name}*Ω = c·Ω with c = ±ζ_D^k"),
            signed.is_some(),
            signed.map(|(sg, k)| format!("c = {sg}ζ^{k}")).unwrap_or_else(|| "not proportional".into()),
        );
        if let Some((sg, k)) = signed {
            s.value(&format!("{name}_scalar"), format!("{sg}ζ^{k}"));
        }
    }

    let id = linalg::identity::<C>(m);
    let tau_order = (1..=big_d).find(|&k| linalg::mat_pow(&tau, k as u32) == id);
    s.check(
        "tau-order",
        "τ has order D",
        tau_order == Some(big_d),
        format!("order {}", tau_order.map_or("> D".to_string(), |k| k.to_string())),
    );

    let closure = projective_closure_order(&[tau.clone(), rho.clone()], JOUANOLOU_GROUP_BOUND);
    let oracle = monomial_group_order(n, d, JOUANOLOU_GROUP_BOUND);
    let expected = big_d as usize * m;
    s.check(
        "group-finite",
        "⟨τ, ρ⟩ modulo scalars is finite",
        closure.is_some(),
        format!("bound {JOUANOLOU_GROUP_BOUND}"),
    );
    s.check(
        "group-oracle",
        "matrix closure and exponent-vector closure agree",
        closure.is_some() && closure == oracle,
        format!("{closure:?} vs {oracle:?}"),
    );
    s.check(
        "group-order",
        "order modulo scalars is D·(n + 1)",
        closure == Some(expected),
        format!("expected {expected}"),
    );
    if let Some(k) = closure {
        s.value("group_order", k);
    }

    // τ against the monomials of Ω
    let mut monos: Vec<Vec<u32>> = omega
        .components()
        .flat_map(|(_, f)| f.terms().map(|(e, _)| e.to_vec()).collect::<Vec<_>>())
        .collect();
    monos.sort();
    monos.dedup();
    let h: Vec<Jet<C>> = monos.iter().map(|e| Jet::monomial(m, order, e, C::one())).collect();
    let alphas = isotropy_membership(&h, &tau)?;
    let powers: Option<Vec<u64>> = alphas.as_ref().and_then(|a| a.iter().map(|c| zeta_exponent(c, &ctx)).collect());
    s.check(
        "tau-monomials",
        "τ scales every monomial of Ω by a power of ζ_D",
        powers.is_some(),
        powers
            .as_ref()
            .map(|p| format!("exponents {p:?}"))
            .unwrap_or_default(),
    );

    s.assume("Aut of the induced foliation on P^n is the group generated by τ and ρ");
    s.assume("Iso/Fix is isomorphic to that group");
    Ok(s)
}
