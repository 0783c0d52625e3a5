//! End-to-end analyses of a document, rendered as text and JSON.

use serde_json::{json, Value};
use thiserror::Error;

use crate::classes::{
    at_check, fredholm_index, normal_chern, ClassBook, ClassError, Functional, FunctionalValue, GlueEvent,
};
use crate::config::{ConfigError, Document, QhSetup};
use crate::critical::{leading_system, solve, verify_point, CriticalError, CriticalSystem, EmptyReason, SolveReport, UnresolvedKind};
use crate::cyclotomic::Cyclotomic;
use crate::novikov::{NovikovElement, NovikovError};
use crate::polytope::{balanced_point, BalancedFiber, FiberPoint, PolytopeError};
use crate::potential::{render_monomial, PotentialError};
use crate::qh::{verdict, QHElement, QhError, Verdict};
use crate::rational::{fraction_string, Rational};

#[derive(Debug, Error)]
pub enum AppError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Critical(#[from] CriticalError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Qh(#[from] QhError),
}

impl AppError {
    /// 2 for configuration and usage, 4 for insufficient precision, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) | AppError::Usage(_) => 2,
            AppError::Qh(QhError::PrecisionInsufficient { .. }) => 4,
            _ => 3,
        }
    }

    pub fn category(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            4 => "precision",
            _ => "math-domain",
        }
    }

    /// Suggested field order when the failure is a missing root of unity.
    pub fn needs_field_extension(&self) -> Option<u32> {
        let nv = match self {
            AppError::Critical(CriticalError::Novikov(e)) => e,
            AppError::Qh(QhError::Novikov(e)) => e,
            _ => return None,
        };
        match nv {
            NovikovError::NeedsFieldExtension { suggested_order, .. } => Some(*suggested_order),
            _ => None,
        }
    }
}

/// A rendered result: human text and a machine-readable value.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

fn point_json(p: &FiberPoint) -> Value {
    Value::Array(p.0.iter().map(|x| Value::String(x.to_string())).collect())
}

fn cyclo_json(c: &Cyclotomic) -> Value {
    Value::String(c.to_string())
}

/// Balanced fiber of all exponents of the potential.
pub fn balanced_fiber(doc: &Document) -> Result<BalancedFiber, AppError> {
    let exps: Vec<_> = doc.potential.terms().iter().map(|t| t.exponent.clone()).collect();
    Ok(balanced_point(&exps)?)
}

/// `--at`, else the configured fiber point, else the unique balanced point.
pub fn choose_fiber(doc: &Document, at: Option<&FiberPoint>) -> Result<FiberPoint, AppError> {
    if let Some(p) = at {
        if p.dim() != doc.dim {
            return Err(AppError::Usage(format!("--at has {} coordinates, expected {}", p.dim(), doc.dim)));
        }
        return Ok(p.clone());
    }
    if let Some(p) = &doc.fiber_point {
        return Ok(p.clone());
    }
    match balanced_fiber(doc)? {
        BalancedFiber::Unique { point, .. } => Ok(point),
        _ => Err(AppError::Usage("no unique balanced fiber; pass --at".into())),
    }
}

pub fn polytope_report(doc: &Document) -> Result<Report, AppError> {
    let mut text = format!("polytope of {} (dimension {})\n", doc.name, doc.dim);
    let mut facets = Vec::new();
    for (j, (f, l)) in doc.polytope.facets().iter().zip(doc.polytope.facet_functionals()).enumerate() {
        let label = f.label.clone().unwrap_or_else(|| format!("D{}", j + 1));
        text.push_str(&format!("  {label}: normal {:?}, l(u) = {l}\n", f.normal));
        facets.push(json!({
            "label": label,
            "normal": f.normal,
            "offset": fraction_string(&f.offset),
            "functional": l.to_string(),
        }));
    }
    let balanced = balanced_fiber(doc)?;
    let balanced_json = match &balanced {
        BalancedFiber::Unique { point, level } => {
            let interior = doc.polytope.is_interior(point)?;
            let torus = doc.polytope.is_torus_fiber(point)?;
            text.push_str(&format!(
                "balanced point: {point}, common exponent {}, interior: {interior}, torus fiber: {torus}\n",
                level
            ));
            json!({
                "kind": "unique",
                "point": point_json(point),
                "level": fraction_string(level),
                "interior": interior,
                "torus_fiber": torus,
            })
        }
        BalancedFiber::Family { particular, directions } => {
            text.push_str(&format!("balanced fibers: {particular} + span of {} direction(s)\n", directions.len()));
            json!({
                "kind": "family",
                "particular": point_json(particular),
                "directions": directions.iter().map(|d| d.iter().map(fraction_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        }
        BalancedFiber::Empty => {
            text.push_str("balanced point: none\n");
            json!({ "kind": "empty" })
        }
    };
    Ok(Report {
        text,
        json: json!({
            "name": doc.name,
            "dimension": doc.dim,
            "compact": doc.compact,
            "facets": facets,
            "excluded_points": doc.polytope.excluded().iter().map(point_json).collect::<Vec<_>>(),
            "balanced": balanced_json,
        }),
    })
}

pub fn potential_report(doc: &Document, at: Option<&FiberPoint>) -> Result<Report, AppError> {
    let pf = &doc.potential;
    let mut text = format!("PO = {pf}\n");
    let partials = pf.partials();
    for (i, d) in partials.iter().enumerate() {
        text.push_str(&format!("dPO/dy{} = {d}\n", i + 1));
    }
    let terms: Vec<Value> = pf
        .terms()
        .iter()
        .map(|t| {
            json!({
                "count": t.count,
                "coefficient": t.coefficient.to_string(),
                "exponent": t.exponent.to_string(),
                "monomial": t.monomial,
                "label": t.label,
            })
        })
        .collect();
    let mut out = json!({
        "potential": pf.to_string(),
        "terms": terms,
        "partials": partials.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    });
    if let Some(u) = at {
        let ev = pf.evaluate_at(u)?;
        text.push_str(&format!("at u = {u}:\n"));
        let mut rows = Vec::new();
        for (t, e) in pf.terms().iter().zip(&ev) {
            let label = t.label.clone().unwrap_or_default();
            text.push_str(&format!("  {label}: exponent {}\n", fraction_string(&e.exponent)));
            rows.push(json!({ "label": t.label, "exponent": fraction_string(&e.exponent) }));
        }
        out["evaluated"] = json!({ "at": point_json(u), "terms": rows });
    }
    Ok(Report { text, json: out })
}

/// Critical points at a fiber, every point re-verified against the potential.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub fiber: FiberPoint,
    pub system: CriticalSystem,
    pub report: SolveReport,
    pub verified: Vec<bool>,
}

pub fn solve_at(doc: &Document, at: Option<&FiberPoint>) -> Result<SolveOutcome, AppError> {
    let fiber = choose_fiber(doc, at)?;
    let system = leading_system(&doc.potential, &fiber)?;
    let report = solve(&system)?;
    let verified = report
        .points
        .iter()
        .map(|p| verify_point(&doc.potential, &fiber, &p.y))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SolveOutcome { fiber, system, report, verified })
}

fn empty_reason_json(r: &EmptyReason) -> Value {
    match r {
        EmptyReason::ResidualConstant(c) => json!({ "kind": "residual_constant", "value": cyclo_json(c) }),
        EmptyReason::MonomialEquation(e) => json!({ "kind": "monomial_equation", "equation": e }),
        EmptyReason::InconsistentRelations { monomial, value } => {
            json!({ "kind": "inconsistent_relations", "monomial": render_monomial(monomial), "value": cyclo_json(value) })
        }
        EmptyReason::CoprimeEliminants => json!({ "kind": "coprime_eliminants" }),
    }
}

pub fn solve_report_render(out: &SolveOutcome) -> Report {
    let r = &out.report;
    let mut text = format!("critical system at u = {}:\n", out.fiber);
    for e in &out.system.equations {
        text.push_str(&format!("  {e} = 0\n"));
    }
    text.push_str(&format!("{} critical point(s):\n", r.points.len()));
    let mut points = Vec::new();
    for (p, ok) in r.points.iter().zip(&out.verified) {
        let coords: Vec<String> = p.y.iter().map(|c| c.to_string()).collect();
        text.push_str(&format!("  y = ({}) [branch {}] verified: {ok}\n", coords.join(", "), p.branch));
        points.push(json!({
            "y": coords,
            "branch": p.branch.to_string(),
            "verified": ok,
        }));
    }
    text.push_str(&format!("{} empty branch(es):\n", r.empty.len()));
    for e in &r.empty {
        text.push_str(&format!("  [branch {}] {}\n", e.branch, e.reason));
    }
    let mut unresolved = Vec::new();
    for u in &r.unresolved {
        let (line, j) = match &u.kind {
            UnresolvedKind::Eliminant { variable, polynomial, degree } => (
                format!("eliminant {polynomial} in w = {} (degree {degree})", render_monomial(variable)),
                json!({ "kind": "eliminant", "variable": render_monomial(variable), "polynomial": polynomial, "degree": degree }),
            ),
            UnresolvedKind::Multivariate { variables, equations } => (
                format!("{variables} variables, no binomial among {}", equations.join("; ")),
                json!({ "kind": "multivariate", "variables": variables, "equations": equations }),
            ),
            UnresolvedKind::PositiveDimensional { dimension } => (
                format!("positive-dimensional component of dimension {dimension}"),
                json!({ "kind": "positive_dimensional", "dimension": dimension }),
            ),
        };
        text.push_str(&format!("  unresolved [branch {}] {line}\n", u.branch));
        let mut j = j;
        j["branch"] = Value::String(u.branch.to_string());
        unresolved.push(j);
    }
    Report {
        text,
        json: json!({
            "fiber": point_json(&out.fiber),
            "system": out.system.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "points": points,
            "empty_branches": r.empty.iter().map(|e| json!({ "branch": e.branch.to_string(), "reason": empty_reason_json(&e.reason) })).collect::<Vec<_>>(),
            "unresolved": unresolved,
            "nodes": r.stats.nodes,
        }),
    }
}

/// Class data after propagating every functional through the gluing rules.
#[derive(Debug, Clone)]
pub struct ClassOutcome {
    pub book: ClassBook,
    pub events: Vec<GlueEvent>,
    pub index_rows: Vec<IndexRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexRow {
    pub name: String,
    pub chi: i64,
    pub c1: i64,
    pub index: Rational,
    pub normal_chern: Rational,
    pub z_du: i64,
    pub transversal: bool,
}

pub fn analyze_classes(doc: &Document) -> Result<ClassOutcome, AppError> {
    let mut events = Vec::new();
    let book = match &doc.classes {
        Some(book) => {
            let mut book = book.clone();
            for f in [Functional::Chern, Functional::Area, Functional::Boundary] {
                let (next, ev) = book.propagate(f)?;
                book = next;
                events.extend(ev);
            }
            Some(book)
        }
        None => None,
    };
    let mut index_rows = Vec::new();
    for c in &doc.index_checks {
        let from_class = match (&c.class, &book) {
            (Some(r), Some(b)) => Some(b.lattice(&r.lattice)?.class(&r.class)?.chern()?),
            _ => None,
        };
        let c1 = match (c.c1, from_class) {
            (Some(a), Some(b)) if a != b => {
                return Err(AppError::Usage(format!("index check `{}`: c1 = {a} but the class gives {b}", c.name)))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => unreachable!("validated"),
        };
        let chi = c.euler_characteristic();
        let index = fredholm_index(c.dimension, chi, c1, &c.punctures);
        let cn = normal_chern(&index, c.genus, c.even_punctures, c.boundary_components);
        let transversal = at_check(&index, &cn, c.z_du);
        index_rows.push(IndexRow { name: c.name.clone(), chi, c1, index, normal_chern: cn, z_du: c.z_du, transversal });
    }
    let book = book.unwrap_or_else(|| ClassBook::new(Vec::new(), Vec::new()).expect("empty book"));
    Ok(ClassOutcome { book, events, index_rows })
}

fn value_json(v: Result<FunctionalValue, ClassError>) -> Value {
    match v {
        Ok(FunctionalValue::Integer(x)) => json!(x),
        Ok(FunctionalValue::Affine(a)) => json!(a.to_string()),
        Ok(FunctionalValue::Vector(v)) => json!(v),
        Err(_) => Value::Null,
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Null => "undeclared".into(),
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("({})", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

pub fn classes_report(doc: &Document) -> Result<Report, AppError> {
    let out = analyze_classes(doc)?;
    let mut text = String::new();
    let mut lattices = Vec::new();
    for l in out.book.lattices() {
        text.push_str(&format!("lattice {} (basis {})\n", l.name(), l.basis().join(", ")));
        let mut gens = Vec::new();
        for g in l.generators() {
            let c = l.generator(g)?;
            let vals = [
                ("c1", value_json(c.value(Functional::Chern))),
                ("maslov", value_json(c.value(Functional::Maslov))),
                ("area", value_json(c.value(Functional::Area))),
                ("boundary", value_json(c.value(Functional::Boundary))),
            ];
            let cols: Vec<String> = vals.iter().map(|(k, v)| format!("{k} = {}", value_text(v))).collect();
            text.push_str(&format!("  {g} = {c} | {}\n", cols.join(" | ")));
            let mut j = json!({ "label": g, "normal_form": c.to_string(), "coords": c.coords() });
            for (k, v) in vals {
                j[k] = v;
            }
            gens.push(j);
        }
        let mut pairings = Vec::new();
        let divisors: Vec<String> = l.divisors().cloned().collect();
        if !divisors.is_empty() {
            text.push_str("  pairings:\n");
        }
        for g in l.generators() {
            let c = l.generator(g)?;
            let mut row = Vec::new();
            for d in &divisors {
                let v = c.pair(d)?;
                row.push(format!("{g}.{d} = {v}"));
                pairings.push(json!({ "class": g, "divisor": d, "value": v }));
            }
            if !row.is_empty() {
                text.push_str(&format!("    {}\n", row.join(", ")));
            }
        }
        lattices.push(json!({ "name": l.name(), "basis": l.basis(), "generators": gens, "pairings": pairings }));
    }
    let mut gluing = Vec::new();
    if !out.events.is_empty() {
        text.push_str("gluing:\n");
    }
    for e in &out.events {
        let (line, j) = match e {
            GlueEvent::Derived(s) => {
                let (l, g, v) = s.derived.as_ref().unwrap();
                (
                    format!("{}: {} of {l}.{g} = {v}", s.rule, s.functional),
                    json!({ "rule": s.rule, "functional": s.functional.to_string(), "kind": "derived", "lattice": l, "class": g, "value": v.to_string() }),
                )
            }
            GlueEvent::Checked(s) => (
                format!("{}: {} consistent", s.rule, s.functional),
                json!({ "rule": s.rule, "functional": s.functional.to_string(), "kind": "checked" }),
            ),
            GlueEvent::Unresolved { rule, functional, unknowns } => (
                format!("{rule}: {functional} underdetermined ({unknowns} unknowns)"),
                json!({ "rule": rule, "functional": functional.to_string(), "kind": "unresolved", "unknowns": unknowns }),
            ),
        };
        text.push_str(&format!("  {line}\n"));
        gluing.push(j);
    }
    let mut index = Vec::new();
    if !out.index_rows.is_empty() {
        text.push_str("index arithmetic:\n");
    }
    for r in &out.index_rows {
        text.push_str(&format!(
            "  {}: chi = {}, c1 = {}, ind = {}, c_N = {}, Z(du) = {}, automatic transversality: {}\n",
            r.name, r.chi, r.c1, r.index, r.normal_chern, r.z_du, r.transversal
        ));
        index.push(json!({
            "name": r.name,
            "chi": r.chi,
            "c1": r.c1,
            "index": fraction_string(&r.index),
            "normal_chern": fraction_string(&r.normal_chern),
            "z_du": r.z_du,
            "transversal": r.transversal,
        }));
    }
    Ok(Report { text, json: json!({ "lattices": lattices, "gluing": gluing, "index_checks": index }) })
}

#[derive(Debug, Clone)]
pub struct QhOutcome {
    pub semisimple: bool,
    pub roots: Option<Vec<NovikovElement>>,
    pub idempotents: Option<Vec<QHElement>>,
    pub verified: bool,
}

pub fn analyze_qh(setup: &QhSetup, precision: Option<&Rational>) -> Result<QhOutcome, AppError> {
    let ring = &setup.ring;
    let semisimple = ring.is_semisimple(precision)?;
    let roots = match (&setup.roots, setup.binomial) {
        (Some(r), _) => Some(r.clone()),
        (None, true) => Some(ring.binomial_roots()?),
        (None, false) => None,
    };
    let idempotents = match (&roots, semisimple) {
        (Some(r), true) => Some(ring.idempotents(r)?),
        _ => None,
    };
    let verified = idempotents.as_ref().is_some_and(|es| ring.verify_idempotents(es));
    Ok(QhOutcome { semisimple, roots, idempotents, verified })
}

pub fn qh_report(doc: &Document, precision: Option<&Rational>) -> Result<Report, AppError> {
    let setup = doc.qh.as_ref().ok_or_else(|| AppError::Usage("document has no qh_ring section".into()))?;
    let out = analyze_qh(setup, precision)?;
    Ok(render_qh(setup, &out))
}

fn render_qh(setup: &QhSetup, out: &QhOutcome) -> Report {
    let mut text = format!("QH = Lambda[z]/({})\nsemisimple: {}\n", setup.ring, out.semisimple);
    if let Some(r) = &out.roots {
        let rs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        text.push_str(&format!("roots: {}\n", rs.join(", ")));
    }
    if let Some(es) = &out.idempotents {
        for (i, e) in es.iter().enumerate() {
            text.push_str(&format!("e{} = {e}\n", i + 1));
        }
    }
    text.push_str(&format!("idempotents verified: {}\n", out.verified));
    Report {
        text,
        json: json!({
            "ring": setup.ring.to_string(),
            "semisimple": out.semisimple,
            "roots": out.roots.as_ref().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            "idempotents": out.idempotents.as_ref().map(|es| es.iter().map(|e| e.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()),
            "verified": out.verified,
        }),
    }
}

/// Everything, ending in the verdict.
pub fn full_report(doc: &Document, at: Option<&FiberPoint>, precision: Option<&Rational>) -> Result<(Report, Verdict), AppError> {
    let poly = polytope_report(doc)?;
    let fiber = choose_fiber(doc, at)?;
    let pot = potential_report(doc, Some(&fiber))?;
    let solved = solve_at(doc, Some(&fiber))?;
    let sol = solve_report_render(&solved);
    let classes = if doc.classes.is_some() || !doc.index_checks.is_empty() { Some(classes_report(doc)?) } else { None };
    let (qh, semisimple, verified) = match &doc.qh {
        Some(setup) => {
            let out = analyze_qh(setup, precision)?;
            (Some(render_qh(setup, &out)), out.semisimple, out.verified)
        }
        None => (None, false, false),
    };
    let v = verdict(&solved.report, semisimple, verified && solved.verified.iter().all(|x| *x));
    let mut text = String::new();
    for part in [Some(&poly), Some(&pot), Some(&sol), classes.as_ref(), qh.as_ref()].into_iter().flatten() {
        text.push_str(&part.text);
        text.push('\n');
    }
    text.push_str(&format!("verdict: {}\n  {}\n", v.conclusion, v.justification));
    let json = json!({
        "polytope": poly.json,
        "potential": pot.json,
        "solve": sol.json,
        "classes": classes.map(|c| c.json),
        "qh": qh.map(|q| q.json),
        "verdict": {
            "has_critical_point": v.has_critical_point,
            "qh_semisimple": v.qh_semisimple,
            "idempotents_verified": v.idempotents_verified,
            "conclusion": v.conclusion.to_string(),
            "justification": v.justification,
        },
    });
    Ok((Report { text, json }, v))
}
