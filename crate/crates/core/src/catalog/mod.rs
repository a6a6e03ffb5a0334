//! Named example foliations with machine-checked facts. Claims that jets
//! cannot decide are kept as assumptions and never reported as checked.

mod jouanolou;
mod named;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{CalcError, PForm};
use crate::coeff::Field;
use crate::germdiff::GermError;
use crate::holonomy::HolonomyError;
use crate::jets::JetError;
use crate::logforms::LogFormError;
use crate::rigidity::RigidityError;

pub use jouanolou::{build_jouanolou, monomial_group_order, projective_closure_order, JOUANOLOU_GROUP_BOUND};
pub use named::build_named;

#[derive(Debug, Clone, Error)]
pub enum CatalogError {
    #[error("unknown scenario `{0}`")]
    UnknownId(String),
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("ℚ(ζ_{d}) exceeds the cyclotomic bound {bound}")]
    CyclotomicBound { d: u64, bound: u64 },
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    LogForm(#[from] LogFormError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    Holonomy(#[from] HolonomyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub key: String,
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedObject {
    pub name: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scenario {
    pub id: String,
    pub summary: String,
    pub field: String,
    pub objects: Vec<NamedObject>,
    pub facts: Vec<Fact>,
    /// Statements recorded but not checked.
    pub assumptions: Vec<String>,
    /// Computed quantities worth reporting.
    pub values: BTreeMap<String, String>,
}

impl Scenario {
    fn new(id: &str, summary: &str, field: &str) -> Self {
        Self {
            id: id.to_string(),
            summary: summary.to_string(),
            field: field.to_string(),
            objects: vec![],
            facts: vec![],
            assumptions: vec![],
            values: BTreeMap::new(),
        }
    }

    fn object(&mut self, name: &str, text: String) {
        self.objects.push(NamedObject {
            name: name.to_string(),
            text,
        });
    }

    fn check(&mut self, key: &str, claim: &str, passed: bool, detail: impl Into<String>) {
        self.facts.push(Fact {
            key: key.to_string(),
            claim: claim.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn assume(&mut self, statement: &str) {
        self.assumptions.push(statement.to_string());
    }

    fn value(&mut self, key: &str, v: impl ToString) {
        self.values.insert(key.to_string(), v.to_string());
    }

    pub fn all_passed(&self) -> bool {
        self.facts.iter().all(|f| f.passed)
    }

    pub fn fact(&self, key: &str) -> Option<&Fact> {
        self.facts.iter().find(|f| f.key == key)
    }

    /// One line per fact and per assumption.
    pub fn transcript(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .facts
            .iter()
            .map(|f| {
                let tag = if f.passed { "PASS" } else { "FAIL" };
                if f.detail.is_empty() {
                    format!("{tag} {}: {}", f.key, f.claim)
                } else {
                    format!("{tag} {}: {} ({})", f.key, f.claim, f.detail)
                }
            })
            .collect();
        out.extend(self.values.iter().map(|(k, v)| format!("VALUE {k} = {v}")));
        out.extend(self.assumptions.iter().map(|a| format!("ASSUMED {a}")));
        out
    }
}

/// `c` with `a = c·b`, read off the first nonzero coefficient of `b`.
/// `a` must be known to at least the order of `b`.
pub(crate) fn proportionality<F: Field>(a: &PForm<F>, b: &PForm<F>) -> Option<F> {
    if a.order() < b.order() {
        return None;
    }
    let (idx, f) = b.components().find(|(_, f)| !f.is_zero())?;
    let (e, c0) = f.terms().find(|(_, c)| !c.is_negligible())?;
    let c = a.get(idx).coeff(e) / c0.clone();
    a.agrees_with(&b.scale(&c)).then_some(c)
}

/// Scenario ids with one-line summaries.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("regular", "regular foliation v·dz₁ and the shape of its isotropy"),
        ("flow-tangent", "flow of a tangent vector field fixes the leaves"),
        ("homogeneous", "dilations of homogeneous forms, conical and not"),
        ("logarithmic", "logarithmic form with ℤ-independent residues"),
        ("wedge-product", "codimension-two foliations given by wedge products"),
        ("delta-cycle", "cyclic permutation scaling a logarithmic form by ζ₃"),
        ("rigid-log", "logarithmic form with rigid initial jets"),
        ("four-branch", "four-branch logarithmic form with non-rigid initial jets"),
        ("jouanolou", "Jouanolou foliation of degree 2 on P²; use jouanolou-N-D for others"),
    ]
}

/// Builds a scenario by id; `jouanolou-N-D` selects the parameters.
pub fn build(id: &str, max_cyclotomic: u64) -> Result<Scenario, CatalogError> {
    if id == "jouanolou" {
        return build_jouanolou(2, 2, max_cyclotomic);
    }
    if let Some(rest) = id.strip_prefix("jouanolou-") {
        let parts: Vec<&str> = rest.split('-').collect();
        let parse = |s: &str| s.parse::<usize>().map_err(|_| CatalogError::UnknownId(id.to_string()));
        if parts.len() != 2 {
            return Err(CatalogError::UnknownId(id.to_string()));
        }
        return build_jouanolou(parse(parts[0])?, parse(parts[1])?, max_cyclotomic);
    }
    build_named(id)
}

#[cfg(test)]
mod tests;
