//! Subcommand implementations. Each returns a verdict and a JSON result.

use clap::{Args, Subcommand};
use germcalc::blowup::{blowup_form, blowup_logform, centralizer_classify, normal_form_1d, BlowupResult, Centralizer, Kind1D};
use germcalc::calculus::{integrability_check, DiffeoJet, PForm, VectorField};
use germcalc::catalog;
use germcalc::coeff::{Field, FieldSpec};
use germcalc::germdiff::{diffeo_log, flow_at, formal_flow, jordan_decompose, poincare_linearize};
use germcalc::holonomy::{holonomy_map, tangency_order, HolonomyField, HolonomyOptions, Loop, Poly2};
use germcalc::jets::Jet;
use germcalc::linalg::Mat;
use germcalc::logforms::{
    closedness_residual, fix_test, integrating_factor_solve, iso_cofactor, residue_action, FixHints, FixVerdict, LogForm,
    Membership,
};
use germcalc::rigidity::isotropy_lie_algebra;
use num_complex::Complex64;
use serde_json::{json, Value as Json};

use crate::dsl::{parse, ParseContext};
use crate::eval::{to_field, to_map, Evaluator, Value};
use crate::field::CliField;
use crate::CliError;

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frobenius test Ω∧dΩ = 0 (or dω_j∧Ω = 0 given factors).
    CheckIntegrable {
        #[arg(long)]
        form: String,
        /// Decomposition factor of a p-form; repeat p times.
        #[arg(long)]
        factor: Vec<String>,
    },
    /// Pullback Φ*Ω.
    Pullback(FormMap),
    /// Membership of Φ in Iso: Φ*Ω = u·Ω with u(0) ≠ 0.
    Iso(FormMap),
    /// Whether Φ sends every leaf into itself.
    Fix {
        #[command(flatten)]
        fm: FormMap,
        /// Declare the form conical (skips the check).
        #[arg(long)]
        conical: Option<bool>,
        /// Declare the map unipotent (skips the check).
        #[arg(long)]
        unipotent: Option<bool>,
    },
    /// Time-t flow of a vector field, or its flow polynomials in t.
    Flow {
        /// Vector field `[X1, …, Xn]`.
        #[arg(long)]
        vf: String,
        /// Time; omit for the polynomial flow of a nilpotent field.
        #[arg(long)]
        t: Option<String>,
    },
    /// Infinitesimal generator of a unipotent map.
    Log(MapArg),
    /// Multiplicative Jordan decomposition φ = φ_S∘φ_U.
    Jordan(MapArg),
    /// Poincaré linearization of a map with scalar linear part.
    Linearize(MapArg),
    /// Integrating factor f with d(Ω/f) = 0.
    Intfactor {
        #[arg(long)]
        form: String,
        /// Largest degree tried for f.
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// Residues and rational relations of a logform.
    Residues {
        #[arg(long)]
        form: String,
    },
    /// Blow-up in the chart (x, t) ↦ (x, x·t).
    Blowup {
        #[arg(long)]
        form: String,
    },
    /// One-variable normal form of (v/x^l) dx; always uses one variable x.
    Normal1d {
        /// Pole order; negative for a zero of that order.
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        /// Unit v(x) with v(0) ≠ 0.
        #[arg(long)]
        v: String,
        /// A symmetry `[h]` of the model to classify.
        #[arg(long)]
        symmetry: Option<String>,
    },
    /// Numerical holonomy of dx/ds = x·G(γ, x^r)/F(γ, x^r)·γ' along a circle.
    Holonomy(HolonomyArgs),
    /// Isotropy Lie algebra of homogeneous polynomials.
    Rigidity {
        /// A homogeneous polynomial; repeat for a tuple.
        #[arg(long = "poly", required = true)]
        polys: Vec<String>,
    },
    /// Named example foliations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Args, Debug)]
pub struct FormMap {
    #[arg(long)]
    pub form: String,
    /// Map `[Φ1, …, Φn]`.
    #[arg(long)]
    pub map: String,
}

#[derive(Args, Debug)]
pub struct MapArg {
    #[arg(long)]
    pub map: String,
}

#[derive(Args, Debug)]
pub struct HolonomyArgs {
    /// G(z1, z2): z1 is the loop coordinate, z2 stands for x^r.
    #[arg(long)]
    pub g: String,
    /// F(z1, z2), nonvanishing on the loop.
    #[arg(long)]
    pub f: String,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Loop centre, e.g. `0` or `(1+0.5j)`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub center: String,
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta0: f64,
    /// Winding number; 0 gives the constant loop.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub turns: f64,
    #[arg(long, default_value_t = 8)]
    pub jet_order: usize,
    /// Threshold for the tangency order of a tangent-to-identity map.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// List scenario ids.
    List,
    /// Build a scenario and check its facts.
    Run {
        id: String,
        /// Jouanolou dimension n.
        #[arg(long)]
        n: Option<usize>,
        /// Jouanolou degree d.
        #[arg(long)]
        d: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckIntegrable { .. } => "check-integrable",
            Command::Pullback(_) => "pullback",
            Command::Iso(_) => "iso",
            Command::Fix { .. } => "fix",
            Command::Flow { .. } => "flow",
            Command::Log(_) => "log",
            Command::Jordan(_) => "jordan",
            Command::Linearize(_) => "linearize",
            Command::Intfactor { .. } => "intfactor",
            Command::Residues { .. } => "residues",
            Command::Blowup { .. } => "blowup",
            Command::Normal1d { .. } => "normal1d",
            Command::Holonomy(_) => "holonomy",
            Command::Rigidity { .. } => "rigidity",
            Command::Catalog { .. } => "catalog",
        }
    }
}

/// `yes`/`no`/`unknown`, or `none` for commands without a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
    None,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
            Verdict::None => "none",
        }
    }

    pub fn passed(self) -> bool {
        matches!(self, Verdict::Yes | Verdict::None)
    }
}

pub type Outcome = Result<(Verdict, Json), CliError>;

/// Settings shared by the field-generic commands.
pub struct Session {
    pub n: usize,
    pub order: usize,
    pub field: FieldSpec,
}

impl Session {
    fn names(&self) -> Vec<String> {
        ParseContext::new(self.n, self.field).names()
    }

    fn value<F: CliField>(&self, what: &str, src: &str) -> Result<Value<F>, CliError> {
        let ctx = ParseContext::new(self.n, self.field);
        let e = parse(src, &ctx).map_err(|d| CliError::Parse {
            what: what.to_string(),
            line: d.span.line,
            col: d.span.col,
            message: d.message,
        })?;
        Evaluator::new(self.n, self.order, self.field)
            .eval(&e)
            .map_err(|d| CliError::Parse {
                what: what.to_string(),
                line: d.span.line,
                col: d.span.col,
                message: d.message,
            })
    }

    /// A form; a logform is replaced by its cleared holomorphic form.
    fn form<F: CliField>(&self, what: &str, src: &str) -> Result<(PForm<F>, Option<LogForm<F>>), CliError> {
        match self.value::<F>(what, src)? {
            Value::Form(w) => Ok((w, None)),
            Value::LogForm(l) => Ok((l.clear_denominators(), Some(l))),
            v => Err(CliError::input(what, format!("expected a form, got a {}", v.kind()))),
        }
    }

    fn function<F: CliField>(&self, what: &str, src: &str) -> Result<Jet<F>, CliError> {
        match self.value::<F>(what, src)? {
            Value::Form(w) if w.degree() == 0 => Ok(w.as_function()),
            v => Err(CliError::input(what, format!("expected a function, got a {}", v.kind()))),
        }
    }

    fn map<F: CliField>(&self, what: &str, src: &str) -> Result<DiffeoJet<F>, CliError> {
        to_map(self.value::<F>(what, src)?).map_err(|m| CliError::input(what, m))
    }

    fn vector_field<F: CliField>(&self, what: &str, src: &str) -> Result<VectorField<F>, CliError> {
        to_field(self.value::<F>(what, src)?).map_err(|m| CliError::input(what, m))
    }

    fn scalar<F: CliField>(&self, what: &str, src: &str) -> Result<F, CliError> {
        let f = self.function::<F>(what, src)?;
        if f.terms().any(|(e, c)| e.iter().any(|&k| k > 0) && !c.is_negligible()) {
            return Err(CliError::input(what, "expected a constant"));
        }
        Ok(f.constant_term())
    }
}

fn math(e: impl std::fmt::Display) -> CliError {
    CliError::Math(e.to_string())
}

fn form_text<F: Field>(w: &PForm<F>, names: &[String]) -> String {
    w.to_text_with(names)
}

fn map_text<F: Field>(m: &DiffeoJet<F>, names: &[String]) -> String {
    m.to_text_with(names)
}

fn mat_json<F: Field>(m: &Mat<F>) -> Json {
    json!(m.iter().map(|r| r.iter().map(|c| c.to_text()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn constant_text<F: Field>(f: &Jet<F>) -> Option<String> {
    f.terms()
        .all(|(e, c)| e.iter().all(|&k| k == 0) || c.is_negligible())
        .then(|| f.constant_term().to_text())
}

/// Commands whose coefficients live in the chosen field.
pub fn run_generic<F: CliField>(cmd: &Command, s: &Session) -> Outcome {
    let names = s.names();
    match cmd {
        Command::CheckIntegrable { form, factor } => {
            let (w, _) = s.form::<F>("--form", form)?;
            let parts = factor
                .iter()
                .map(|f| s.form::<F>("--factor", f).map(|p| p.0))
                .collect::<Result<Vec<_>, _>>()?;
            let rep = integrability_check(&w, (!parts.is_empty()).then_some(parts.as_slice())).map_err(math)?;
            Ok((
                Verdict::from_bool(rep.integrable),
                json!({
                    "form": form_text(&w, &names),
                    "degree": w.degree(),
                    "integrable": rep.integrable,
                    "effective_order": rep.order,
                    "residuals": rep.residuals.iter().map(|r| form_text(r, &names)).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Pullback(fm) => {
            let (w, _) = s.form::<F>("--form", &fm.form)?;
            let phi = s.map::<F>("--map", &fm.map)?;
            let pulled = phi.pullback(&w).map_err(math)?;
            Ok((
                Verdict::None,
                json!({
                    "form": form_text(&w, &names),
                    "map": map_text(&phi, &names),
                    "pulled": form_text(&pulled, &names),
                    "effective_order": pulled.order(),
                }),
            ))
        }
        Command::Iso(fm) => {
            let (w, log) = s.form::<F>("--form", &fm.form)?;
            let phi = s.map::<F>("--map", &fm.map)?;
            let m = iso_cofactor(&phi, &w).map_err(math)?;
            let action = match &log {
                Some(l) => match residue_action(&phi, l) {
                    Ok(a) => json!({
                        "sigma": a.sigma,
                        "c": a.c.to_text(),
                        "m": a.m,
                        "c_pow_m_is_one": a.c_pow_m_is_one,
                        "order": a.order,
                    }),
                    Err(e) => json!({ "error": e.to_string() }),
                },
                None => Json::Null,
            };
            let (verdict, body) = match &m {
                Membership::Yes { cofactor, order } => (
                    Verdict::Yes,
                    json!({
                        "membership": "yes",
                        "cofactor": cofactor.to_text_with(&names),
                        "cofactor_constant": constant_text(cofactor),
                        "order": order,
                        "residual": null,
                        "residual_degree": null,
                    }),
                ),
                Membership::No { residual, degree } => (
                    Verdict::No,
                    json!({
                        "membership": "no",
                        "cofactor": null,
                        "cofactor_constant": null,
                        "order": null,
                        "residual": form_text(residual, &names),
                        "residual_degree": degree,
                    }),
                ),
                Membership::Unknown => (
                    Verdict::Unknown,
                    json!({
                        "membership": "unknown",
                        "cofactor": null,
                        "cofactor_constant": null,
                        "order": null,
                        "residual": null,
                        "residual_degree": null,
                    }),
                ),
            };
            let mut body = body;
            body["form"] = json!(form_text(&w, &names));
            body["map"] = json!(map_text(&phi, &names));
            body["residue_action"] = action;
            Ok((verdict, body))
        }
        Command::Fix { fm, conical, unipotent } => {
            let (w, _) = s.form::<F>("--form", &fm.form)?;
            let phi = s.map::<F>("--map", &fm.map)?;
            let hints = FixHints {
                conical: *conical,
                unipotent: *unipotent,
            };
            let r = fix_test(&phi, &w, hints).map_err(math)?;
            let verdict = match r.verdict {
                FixVerdict::Yes => Verdict::Yes,
                FixVerdict::No => Verdict::No,
                FixVerdict::Unknown => Verdict::Unknown,
            };
            Ok((
                verdict,
                json!({
                    "form": form_text(&w, &names),
                    "map": map_text(&phi, &names),
                    "reason": r.reason,
                    "cofactor": r.cofactor.to_text_with(&names),
                    "generator": r.generator.map(|g| g.to_text_with(&names)),
                    "integrating_factor": r.integrating_factor.map(|f| f.to_text_with(&names)),
                    "closed_certificate": r.closed_certificate,
                }),
            ))
        }
        Command::Flow { vf, t } => {
            let x = s.vector_field::<F>("--vf", vf)?;
            match t {
                Some(t) => {
                    let tv = s.scalar::<F>("--t", t)?;
                    let phi = flow_at(&x, &tv).map_err(math)?;
                    Ok((
                        Verdict::None,
                        json!({
                            "field": x.to_text_with(&names),
                            "t": tv.to_text(),
                            "map": map_text(&phi, &names),
                            "t_degree": null,
                            "t_coefficients": null,
                        }),
                    ))
                }
                None => {
                    let p = formal_flow(&x).map_err(math)?;
                    let coeffs: Vec<Vec<String>> = (0..p.n())
                        .map(|i| p.t_coefficients(i).iter().map(|j| j.to_text_with(&names)).collect())
                        .collect();
                    Ok((
                        Verdict::None,
                        json!({
                            "field": x.to_text_with(&names),
                            "t": null,
                            "map": null,
                            "t_degree": p.t_degree(),
                            "t_coefficients": coeffs,
                        }),
                    ))
                }
            }
        }
        Command::Log(m) => {
            let phi = s.map::<F>("--map", &m.map)?;
            let x = diffeo_log(&phi).map_err(math)?;
            Ok((
                Verdict::None,
                json!({ "map": map_text(&phi, &names), "generator": x.to_text_with(&names) }),
            ))
        }
        Command::Jordan(m) => {
            let phi = s.map::<F>("--map", &m.map)?;
            let j = jordan_decompose(&phi).map_err(math)?;
            let recomposes = j.semisimple.compose(&j.unipotent).map(|c| c.agrees_with(&phi)).unwrap_or(false);
            Ok((
                Verdict::from_bool(recomposes),
                json!({
                    "map": map_text(&phi, &names),
                    "semisimple": map_text(&j.semisimple, &names),
                    "unipotent": map_text(&j.unipotent, &names),
                    "conjugator": map_text(&j.conjugator, &names),
                    "normal_form": map_text(&j.normal_form, &names),
                    "linear_semisimple": mat_json(&j.linear_semisimple),
                    "recomposes": recomposes,
                }),
            ))
        }
        Command::Linearize(m) => {
            let phi = s.map::<F>("--map", &m.map)?;
            let l = poincare_linearize(&phi).map_err(math)?;
            Ok((
                Verdict::from_bool(l.residual_zero),
                json!({
                    "map": map_text(&phi, &names),
                    "conjugator": map_text(&l.conjugator, &names),
                    "rho": l.rho.to_text(),
                    "residual_zero": l.residual_zero,
                }),
            ))
        }
        Command::Intfactor { form, kmax } => {
            let (w, _) = s.form::<F>("--form", form)?;
            let f = integrating_factor_solve(&w, *kmax);
            let closed = f.as_ref().map(|f| closedness_residual(&w, f).is_zero());
            Ok((
                Verdict::from_bool(closed == Some(true)),
                json!({
                    "form": form_text(&w, &names),
                    "k_max": kmax,
                    "factor": f.map(|f| f.to_text_with(&names)),
                    "closed": closed,
                }),
            ))
        }
        Command::Residues { form } => {
            let l = match s.value::<F>("--form", form)? {
                Value::LogForm(l) => l,
                v => return Err(CliError::input("--form", format!("expected logform{{ … }}, got a {}", v.kind()))),
            };
            let relation = l
                .residue_relation()
                .map(|(i, j, q)| json!({ "i": i, "j": j, "q": q.to_string() }));
            Ok((
                Verdict::None,
                json!({
                    "residues": l.residues().iter().map(|c| c.to_text()).collect::<Vec<_>>(),
                    "branches": l.branches.iter().map(|b| b.f.to_text_with(&names)).collect::<Vec<_>>(),
                    "relation": relation,
                    "cleared": form_text(&l.clear_denominators(), &names),
                }),
            ))
        }
        Command::Blowup { form } => {
            let (r, log): (BlowupResult<F>, bool) = match s.value::<F>("--form", form)? {
                Value::LogForm(l) => (blowup_logform(&l).map_err(math)?, true),
                Value::Form(w) => (blowup_form(&w).map_err(math)?, false),
                v => return Err(CliError::input("--form", format!("expected a form, got a {}", v.kind()))),
            };
            let verdict = if log {
                Verdict::from_bool(r.shape_holds == Some(true) && r.closed)
            } else {
                Verdict::None
            };
            let chart: Vec<String> = {
                let mut v = names.clone();
                if v.len() >= 2 {
                    v[1] = "t".into();
                }
                v
            };
            Ok((
                verdict,
                json!({
                    "chart": chart.clone(),
                    "pulled": form_text(&r.pulled, &chart),
                    "multiplicities": r.multiplicities,
                    "stricts": r.stricts.iter().map(|f| f.to_text_with(&chart)).collect::<Vec<_>>(),
                    "alpha": r.alpha.map(|a| a.to_text()),
                    "closed": r.closed,
                    "shape_holds": r.shape_holds,
                }),
            ))
        }
        Command::Normal1d { l, v, symmetry } => {
            let one = Session {
                n: 1,
                order: s.order,
                field: s.field,
            };
            let names = one.names();
            let vj = one.function::<F>("--v", v)?;
            let nf = normal_form_1d(*l, &vj).map_err(math)?;
            let residual_zero = nf.residual_zero(&vj).map_err(math)?;
            let (kind, m, pole, lambda) = match &nf.kind {
                Kind1D::Regular { m } => ("regular", Some(*m), None, None),
                Kind1D::SimplePole { lambda } => ("simple-pole", None, Some(1), Some(lambda.to_text())),
                Kind1D::HigherPole { l, lambda } => ("higher-pole", None, Some(*l), Some(lambda.to_text())),
            };
            let centralizer = match symmetry {
                Some(src) => {
                    let h = one.map::<F>("--symmetry", src)?;
                    Some(match centralizer_classify(&nf, &h).map_err(math)? {
                        Centralizer::Rotation { delta } => json!({ "shape": "rotation", "delta": delta.to_text() }),
                        Centralizer::Scaling { rho } => json!({ "shape": "scaling", "rho": rho.to_text() }),
                        Centralizer::Flow { delta, t } => {
                            json!({ "shape": "flow", "delta": delta.to_text(), "t": t.to_text() })
                        }
                        Centralizer::Rejected { reason } => json!({ "shape": "rejected", "reason": reason }),
                    })
                }
                None => None,
            };
            Ok((
                Verdict::from_bool(residual_zero),
                json!({
                    "kind": kind,
                    "m": m,
                    "l": pole,
                    "lambda": lambda,
                    "change": nf.change.to_text_with(&names),
                    "residual_zero": residual_zero,
                    "centralizer": centralizer,
                }),
            ))
        }
        Command::Rigidity { polys } => {
            let h = polys
                .iter()
                .map(|p| s.function::<F>("--poly", p))
                .collect::<Result<Vec<_>, _>>()?;
            let r = isotropy_lie_algebra(&h).map_err(math)?;
            let basis: Vec<Json> = r
                .lie_basis
                .iter()
                .map(|e| json!({ "matrix": mat_json(&e.matrix), "c": e.c.iter().map(|c| c.to_text()).collect::<Vec<_>>() }))
                .collect();
            Ok((
                Verdict::from_bool(r.rigid_with_search()),
                json!({
                    "polynomials": h.iter().map(|p| p.to_text_with(&names)).collect::<Vec<_>>(),
                    "degrees": r.degrees,
                    "dimension": r.dimension,
                    "rigid_infinitesimal": r.rigid_infinitesimal,
                    "lie_basis": basis,
                    "permutation_witnesses": r.permutation_witnesses,
                    "search_complete": r.search_complete,
                    "rigid_with_search": r.rigid_with_search(),
                }),
            ))
        }
        Command::Holonomy(_) | Command::Catalog { .. } => unreachable!("dispatched without a field"),
    }
}

fn complex_text(c: Complex64) -> String {
    c.to_text()
}

fn poly2(j: &Jet<Complex64>) -> Poly2 {
    Poly2::new(j.terms().filter(|(_, c)| **c != Complex64::new(0.0, 0.0)).map(|(e, c)| (e[0], e[1], *c)).collect())
}

pub fn run_holonomy(a: &HolonomyArgs, order: usize) -> Outcome {
    let s = Session {
        n: 2,
        order,
        field: FieldSpec::Float,
    };
    let g = s.function::<Complex64>("--g", &a.g)?;
    let f = s.function::<Complex64>("--f", &a.f)?;
    let center = s.scalar::<Complex64>("--center", &a.center)?;
    if !(a.radius > 0.0 && a.radius.is_finite() && a.theta0.is_finite() && a.turns.is_finite()) {
        return Err(CliError::Usage("--radius must be positive and all loop parameters finite".into()));
    }
    if a.r == 0 || a.jet_order == 0 || a.jet_order > 16 {
        return Err(CliError::Usage("need --r ≥ 1 and 1 ≤ --jet-order ≤ 16".into()));
    }
    let field = HolonomyField {
        g: poly2(&g),
        f: poly2(&f),
        r: a.r,
    };
    let lp = if a.turns == 0.0 {
        Loop::constant(center + Complex64::from_polar(a.radius, a.theta0))
    } else {
        Loop::circle(center, a.radius, a.theta0, a.turns)
    };
    let opts = HolonomyOptions {
        jet_order: a.jet_order,
        ..HolonomyOptions::default()
    };
    let h = holonomy_map(&field, &lp, &opts).map_err(math)?;
    let tangency = tangency_order(&h, a.tol).ok().flatten();
    let d = &h.diagnostics;
    Ok((
        Verdict::None,
        json!({
            "multiplier": complex_text(h.multiplier),
            "integral_multiplier": complex_text(h.integral_multiplier),
            "coefficients": (0..=a.jet_order).map(|k| complex_text(h.coefficient(k))).collect::<Vec<_>>(),
            "radius": h.radius,
            "uncertainty": h.uncertainty,
            "tangency_order": tangency,
            "diagnostics": {
                "steps": d.steps,
                "rejected": d.rejected,
                "max_local_error": d.max_local_error,
                "fit_residual": d.fit_residual,
                "multiplier_gap": d.multiplier_gap,
            },
        }),
    ))
}

pub fn run_catalog(action: &CatalogAction, max_cyclotomic: u64) -> Outcome {
    match action {
        CatalogAction::List => Ok((
            Verdict::None,
            json!({
                "scenarios": catalog::list()
                    .into_iter()
                    .map(|(id, summary)| json!({ "id": id, "summary": summary }))
                    .collect::<Vec<_>>(),
            }),
        )),
        CatalogAction::Run { id, n, d } => {
            let id = match (n, d) {
                (None, None) => id.clone(),
                _ if id == "jouanolou" => format!("jouanolou-{}-{}", n.unwrap_or(2), d.unwrap_or(2)),
                _ => return Err(CliError::Usage(format!("--n and --d apply only to `jouanolou`, not `{id}`"))),
            };
            let sc = catalog::build(&id, max_cyclotomic).map_err(|e| match e {
                catalog::CatalogError::UnknownId(_)
                | catalog::CatalogError::BadParameters(_)
                | catalog::CatalogError::CyclotomicBound { .. } => CliError::Usage(e.to_string()),
                e => math(e),
            })?;
            Ok((
                Verdict::from_bool(sc.all_passed()),
                json!({
                    "scenario": serde_json::to_value(&sc).map_err(math)?,
                    "transcript": sc.transcript(),
                }),
            ))
        }
    }
}
