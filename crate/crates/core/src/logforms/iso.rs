use crate::calculus::{DiffeoJet, PForm, VectorField};
use crate::coeff::Field;
use crate::germdiff::{diffeo_log, is_unipotent, jordan_decompose, scalar_of};
use crate::jets::{Basis, Jet};
use crate::linalg;

use super::{closedness_residual, LogForm, LogFormError};

/// Solves `b = u·a` componentwise for a jet `u`, degree by degree against the
/// lowest homogeneous part of `a`. On failure returns the partial `u` and the
/// first degree of `b` that cannot be matched.
pub fn graded_cofactor<F: Field>(b: &[Jet<F>], a: &[Jet<F>]) -> Result<Jet<F>, (Jet<F>, usize)> {
    let n = a[0].n();
    let order = a.iter().chain(b).map(|j| j.order()).min().unwrap_or(0);
    let a: Vec<Jet<F>> = a.iter().map(|j| j.with_order(order)).collect();
    let b: Vec<Jet<F>> = b.iter().map(|j| j.with_order(order)).collect();
    let mut u = Jet::zero(n, order);
    let Some(v) = a.iter().filter_map(|j| j.valuation()).min() else {
        return if b.iter().all(|j| j.is_zero()) {
            Ok(Jet::one(n, order))
        } else {
            let d = b.iter().filter_map(|j| j.valuation()).min().unwrap_or(0);
            Err((u, d))
        };
    };
    let lead: Vec<Jet<F>> = a.iter().map(|j| j.homogeneous(v)).collect();
    let basis = Basis::get(n, order);
    for k in 0..=order - v {
        let target = v + k;
        let rhs: Vec<F> = b
            .iter()
            .zip(&a)
            .flat_map(|(bi, ai)| (bi - &(&u * ai)).block(target).to_vec())
            .collect();
        if rhs.iter().all(|x| x.is_negligible()) {
            continue;
        }
        let cols: Vec<Vec<F>> = basis
            .monomials(k)
            .iter()
            .map(|e| {
                let m = Jet::monomial(n, order, e, F::one());
                lead.iter().flat_map(|l| (&m * l).block(target).to_vec()).collect()
            })
            .collect();
        let mat: linalg::Mat<F> = (0..rhs.len())
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let Some(sol) = linalg::solve(&mat, &rhs) else {
            return Err((u, target));
        };
        for (e, c) in basis.monomials(k).iter().zip(sol) {
            if !c.is_negligible() {
                u.set_coeff(e, c);
            }
        }
    }
    Ok(u)
}

#[derive(Clone, Debug)]
pub enum Membership<F: Field> {
    /// `Φ*ω = u·ω` to the given order.
    Yes { cofactor: Jet<F>, order: usize },
    /// `Φ*ω − u·ω` for the best partial `u`, first failing in `degree`.
    No { residual: PForm<F>, degree: usize },
    /// `ω` vanishes to the effective order.
    Unknown,
}

impl<F: Field> Membership<F> {
    pub fn cofactor(&self) -> Option<&Jet<F>> {
        match self {
            Membership::Yes { cofactor, .. } => Some(cofactor),
            _ => None,
        }
    }
}

/// Decides `Φ*ω = u·ω` with `u(0) ≠ 0` by graded elimination.
pub fn iso_cofactor<F: Field>(
    phi: &DiffeoJet<F>,
    omega: &PForm<F>,
) -> Result<Membership<F>, LogFormError> {
    let pulled = phi.pullback(omega)?;
    let order = pulled.order().min(omega.order());
    let omega = omega.with_order(order);
    if omega.is_zero() {
        return Ok(Membership::Unknown);
    }
    let keys: Vec<Vec<usize>> = omega
        .components()
        .map(|(k, _)| k.clone())
        .chain(pulled.components().map(|(k, _)| k.clone()))
        .collect();
    let a: Vec<Jet<F>> = keys.iter().map(|k| omega.get(k)).collect();
    let b: Vec<Jet<F>> = keys.iter().map(|k| pulled.get(k).with_order(order)).collect();
    Ok(match graded_cofactor(&b, &a) {
        Ok(u) if !u.constant_term().is_negligible() => Membership::Yes { cofactor: u, order },
        Ok(u) => Membership::No {
            residual: &pulled.with_order(order) - &omega.mul_function(&u),
            degree: omega.valuation().unwrap_or(0),
        },
        Err((u, degree)) => Membership::No {
            residual: &pulled.with_order(order) - &omega.mul_function(&u),
            degree,
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueAction<F: Field> {
    /// `f_{σ(i)}∘Φ = u·f_i`.
    pub sigma: Vec<usize>,
    /// `λ_{σ(i)} = C·λ_i`.
    pub c: F,
    /// Length of the cycle of `σ` through the first branch.
    pub m: usize,
    pub c_pow_m_is_one: bool,
    /// Order to which the branch matches hold.
    pub order: usize,
}

/// Permutation of branches induced by `Φ` and the constant relating the
/// residues.
pub fn residue_action<F: Field>(
    phi: &DiffeoJet<F>,
    l: &LogForm<F>,
) -> Result<ResidueAction<F>, LogFormError> {
    let r = l.branches.len();
    let mut sigma = vec![usize::MAX; r];
    let mut order = l.order().min(phi.order());
    for (j, bj) in l.branches.iter().enumerate() {
        let g = phi.apply_to(&bj.f)?;
        order = order.min(g.order());
        let matches: Vec<usize> = l
            .branches
            .iter()
            .enumerate()
            .filter(|(_, bi)| {
                matches!(graded_cofactor(std::slice::from_ref(&g), std::slice::from_ref(&bi.f)),
                    Ok(u) if !u.constant_term().is_negligible())
            })
            .map(|(i, _)| i)
            .collect();
        match matches[..] {
            [i] if sigma[i] == usize::MAX => sigma[i] = j,
            _ => return Err(LogFormError::BranchMatch(j)),
        }
    }
    let lam = l.residues();
    let c = match (0..r).find(|&i| !lam[i].is_negligible()) {
        Some(i) => lam[sigma[i]].clone() / lam[i].clone(),
        None => F::one(),
    };
    if !(0..r).all(|i| lam[sigma[i]].approx_eq(&(c.clone() * lam[i].clone()))) {
        return Err(LogFormError::InconsistentConstant);
    }
    let mut m = 0;
    if r > 0 {
        let mut i = 0;
        loop {
            i = sigma[i];
            m += 1;
            if i == 0 {
                break;
            }
        }
    }
    let m = m.max(1);
    Ok(ResidueAction {
        c_pow_m_is_one: c.pow_i(m as i64).approx_eq(&F::one()),
        sigma,
        c,
        m,
        order,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FixHints {
    pub conical: Option<bool>,
    pub unipotent: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixVerdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct FixResult<F: Field> {
    pub verdict: FixVerdict,
    pub reason: &'static str,
    /// Cofactor `u` with `Φ*ω = u·ω`.
    pub cofactor: Jet<F>,
    /// `X = log Φ` (or of the unipotent part) when it was computed.
    pub generator: Option<VectorField<F>>,
    /// `f = i_Xω` when it is nonzero.
    pub integrating_factor: Option<Jet<F>>,
    /// Whether `d(ω/f) = 0` holds for that `f`.
    pub closed_certificate: Option<bool>,
}

/// Whether `ω` is homogeneous with `i_Rω = 0`.
pub fn is_conical<F: Field>(omega: &PForm<F>) -> bool {
    let Some(v) = omega.valuation() else {
        return true;
    };
    let homogeneous = omega.components().all(|(_, f)| f.agrees_with(&f.homogeneous(v)));
    let radial = VectorField::radial(omega.n(), omega.order());
    homogeneous && omega.interior(&radial).map(|w| w.is_zero()).unwrap_or(false)
}

struct UnipotentOutcome<F: Field> {
    tangent: bool,
    generator: VectorField<F>,
    factor: Option<Jet<F>>,
    closed: Option<bool>,
}

fn unipotent_case<F: Field>(
    phi: &DiffeoJet<F>,
    omega: &PForm<F>,
) -> Result<UnipotentOutcome<F>, LogFormError> {
    let x = diffeo_log(phi)?;
    let f = omega.interior(&x)?.as_function();
    if f.is_zero() {
        return Ok(UnipotentOutcome {
            tangent: true,
            generator: x,
            factor: None,
            closed: None,
        });
    }
    let closed = closedness_residual(omega, &f).is_zero();
    Ok(UnipotentOutcome {
        tangent: false,
        generator: x,
        factor: Some(f),
        closed: Some(closed),
    })
}

/// Decides whether `Φ ∈ Iso(ω)` sends every leaf into itself, in the cases
/// where a finite test exists: conical `ω`, unipotent `Φ`, or a unipotent
/// Jordan part outside `Fix`.
pub fn fix_test<F: Field>(
    phi: &DiffeoJet<F>,
    omega: &PForm<F>,
    hints: FixHints,
) -> Result<FixResult<F>, LogFormError> {
    let cofactor = match iso_cofactor(phi, omega)? {
        Membership::Yes { cofactor, .. } => cofactor,
        Membership::No { degree, .. } => {
            return Err(LogFormError::NotIso(format!("cofactor fails in degree {degree}")))
        }
        Membership::Unknown => {
            return Err(LogFormError::NotIso("form vanishes to the effective order".into()))
        }
    };
    let conical = hints.conical.unwrap_or_else(|| is_conical(omega));
    if conical {
        let scalar = scalar_of(&phi.linear_part()).is_some();
        return Ok(FixResult {
            verdict: if scalar { FixVerdict::Yes } else { FixVerdict::No },
            reason: if scalar {
                "conical form, linear part is scalar"
            } else {
                "conical form, linear part is not scalar"
            },
            cofactor,
            generator: None,
            integrating_factor: None,
            closed_certificate: None,
        });
    }
    let unipotent = hints
        .unipotent
        .unwrap_or_else(|| is_unipotent(&phi.linear_part()));
    if unipotent {
        let out = unipotent_case(phi, omega)?;
        return Ok(FixResult {
            verdict: if out.tangent { FixVerdict::Yes } else { FixVerdict::No },
            reason: if out.tangent {
                "generator is tangent to the foliation"
            } else {
                "generator is transverse; i_X(omega) is an integrating factor"
            },
            cofactor,
            generator: Some(out.generator),
            integrating_factor: out.factor,
            closed_certificate: out.closed,
        });
    }
    let jd = jordan_decompose(phi)?;
    let out = unipotent_case(&jd.unipotent, omega)?;
    let (verdict, reason) = if out.tangent {
        (
            FixVerdict::Unknown,
            "unipotent part fixes leaves; the class is that of the semisimple part",
        )
    } else {
        (FixVerdict::No, "unipotent Jordan part does not fix leaves")
    };
    Ok(FixResult {
        verdict,
        reason,
        cofactor,
        generator: Some(out.generator),
        integrating_factor: out.factor,
        closed_certificate: out.closed,
    })
}
