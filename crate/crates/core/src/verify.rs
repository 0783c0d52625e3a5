//! The reproduction checklist for the semitoric `CP^2` document.

use serde_json::Value;

use crate::classes::{ClassBook, Functional, FunctionalValue, GluingRule};
use crate::config::{parse_document, Document, QhSetup};
use crate::critical::EmptyReason;
use crate::fixtures;
use crate::novikov::NovikovElement;
use crate::pipeline::{analyze_classes, analyze_qh, balanced_fiber, solve_at, AppError};
use crate::polytope::{AffineExponent, BalancedFiber, FiberPoint};
use crate::potential::{PotentialFunction, PotentialTerm};
use crate::qh::{verdict, Conclusion, QHRing};
use crate::rational::{int, rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn app<T>(r: Result<T, AppError>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn balanced() -> FiberPoint {
    FiberPoint(vec![rat(2, 3), rat(2, 3)])
}

fn check_potential(doc: &Document) -> Check {
    let f = &doc.field;
    let term = |count: u64, exp: &str, mono: [i64; 2]| {
        PotentialTerm::new(count, f.one(), AffineExponent::parse(exp, 2).expect("valid exponent"), mono.to_vec())
    };
    let expected = PotentialFunction::new(
        2,
        f,
        vec![term(1, "u1", [1, 0]), term(1, "u2", [0, 1]), term(1, "4-u1-4*u2", [-1, -4]), term(2, "2-2*u2", [0, -2])],
    )
    .map_err(|e| e.to_string())?;
    ensure(doc.dim == 2 && doc.potential.as_laurent() == expected.as_laurent(), || {
        format!("got {}, expected {}", doc.potential, expected)
    })?;
    Ok(doc.potential.to_string())
}

fn check_balanced(doc: &Document) -> Check {
    match app(balanced_fiber(doc))? {
        BalancedFiber::Unique { point, .. } if point == balanced() => Ok(format!("u = {point}")),
        other => Err(format!("balanced fiber is {other:?}")),
    }
}

fn check_critical(doc: &Document) -> Check {
    let out = app(solve_at(doc, Some(&balanced())))?;
    let r = &out.report;
    ensure(r.points.len() == 3, || format!("{} points", r.points.len()))?;
    ensure(r.unresolved.is_empty(), || "unresolved eliminants remain".into())?;
    let f = &doc.field;
    for p in &r.points {
        let (y1, y2) = (&p.y[0], &p.y[1]);
        ensure((y1 * &(y2 * y2)).is_one(), || format!("y1*y2^2 != 1 at {y1}, {y2}"))?;
        ensure(y2.pow(3) == Some(f.from_int(8)), || format!("y2^3 != 8 at {y2}"))?;
    }
    ensure(out.verified.iter().all(|v| *v), || "a point fails verification".into())?;
    ensure(r.empty.len() == 1, || format!("{} empty branches", r.empty.len()))?;
    let e = &r.empty[0];
    ensure(e.reason == EmptyReason::ResidualConstant(f.one()), || format!("empty branch reason {}", e.reason))?;
    ensure(e.branch.0.len() == 1 && e.branch.0[0].monomial == vec![1, 2] && e.branch.0[0].value == f.from_int(-1), || {
        format!("empty branch is {}", e.branch)
    })?;
    Ok("3 points with y1*y2^2 = 1, y2^3 = 8; branch y1*y2^2 = -1 empty with residual 1".into())
}

fn cap_rule(k: i64) -> GluingRule {
    let piece = |lattice: &str, class: String, multiplicity: i64| crate::classes::GluingPiece {
        lattice: lattice.into(),
        class,
        multiplicity,
    };
    GluingRule {
        name: format!("{k}H = {k}Hp # {m}D4 # {m}D2", m = 2 * k),
        pieces: vec![piece("X1", format!("{k}*Hp"), 1), piece("F4", "D4".into(), 2 * k), piece("F4", "D2".into(), 2 * k)],
        result: piece("CP2", format!("{k}*H"), 1),
    }
}

fn book(doc: &Document) -> Result<&ClassBook, String> {
    doc.classes.as_ref().ok_or_else(|| "document has no class lattices".to_string())
}

fn check_chern(doc: &Document) -> Check {
    let seeds = book(doc)?;
    let out = app(analyze_classes(doc))?;
    let err = |e: crate::classes::ClassError| e.to_string();
    let f4 = out.book.lattice("F4").map_err(err)?;
    let c = |s: &str| f4.class(s).and_then(|x| x.chern()).map_err(err);
    ensure(c("e1")? == 1 && c("e3")? == 1 && c("e2")? == 6, || "c1 of e-classes differ".into())?;
    for k in 1..=5 {
        let sol = seeds.glue(&cap_rule(k), Functional::Chern).map_err(err)?;
        ensure(sol.pieces[0].value == FunctionalValue::Integer(k), || format!("c1({k}Hp) = {}", sol.pieces[0].value))?;
    }
    let d4p = out.book.lattice("CP2_L").and_then(|l| l.class("D4p")).map_err(err)?;
    ensure(d4p.maslov().map_err(err)? == 2, || "maslov(D4p) != 2".into())?;
    let area = d4p.area().map_err(err)?;
    ensure(area == AffineExponent::parse("2-2*u2", 2).unwrap(), || format!("area(D4p) = {area}"))?;
    Ok(format!("c1(e1) = c1(e3) = 1, c1(e2) = 6, c1(kHp) = k for k <= 5, maslov(D4p) = 2, area(D4p) = {area}"))
}

fn check_pairings(doc: &Document) -> Check {
    let err = |e: crate::classes::ClassError| e.to_string();
    let f4 = book(doc)?.lattice("F4").map_err(err)?;
    let p = |a: &str| f4.class(a).and_then(|x| x.pair(a)).map_err(err);
    let (a, b) = (p("e2")?, p("e4")?);
    ensure(a == 4 && b == -4, || format!("e2.e2 = {a}, e4.e4 = {b}"))?;
    Ok("e2.e2 = 4, e4.e4 = -4".into())
}

fn check_index(doc: &Document) -> Check {
    let out = app(analyze_classes(doc))?;
    let got: Vec<_> = out.index_rows.iter().map(|r| (r.index.clone(), r.normal_chern.clone())).collect();
    let want = vec![(int(1), int(0)), (int(2), int(0)), (int(3), int(1))];
    ensure(got == want, || format!("(ind, c_N) = {got:?}"))?;
    ensure(out.index_rows.iter().all(|r| r.transversal), || "automatic transversality fails".into())?;
    Ok("(ind, c_N) = (1, 0), (2, 0), (3, 1), all transversal".into())
}

fn check_qh(doc: &Document) -> Check {
    let setup = doc.qh.as_ref().ok_or("document has no qh_ring")?;
    let out = app(analyze_qh(setup, None))?;
    ensure(out.semisimple, || "not semisimple".into())?;
    let es = out.idempotents.as_ref().ok_or("no idempotents")?;
    ensure(out.verified && es.len() == 3, || "idempotents fail verification".into())?;
    let ring = &setup.ring;
    let f = &doc.field;
    let third = NovikovElement::constant(f.from_rational(rat(1, 3)));
    for (e, eps) in es.iter().zip(out.roots.as_ref().unwrap()) {
        let inv2 = eps.invert(&int(0)).map_err(|e| e.to_string())?.pow(2);
        let closed = ring.scale(&ring.element(vec![eps.pow(2), eps.clone(), NovikovElement::one(f)]), &(&third * &inv2));
        ensure(e == &closed, || format!("idempotent {e} differs from {closed}"))?;
    }
    Ok(format!("semisimple, 3 idempotents (1/3)eps^-2(z^2 + eps*z + eps^2) for {}", ring))
}

fn check_verdict(doc: &Document) -> Check {
    let solved = app(solve_at(doc, Some(&balanced())))?;
    let setup = doc.qh.as_ref().ok_or("document has no qh_ring")?;
    let out = app(analyze_qh(setup, None))?;
    let v = verdict(&solved.report, out.semisimple, out.verified);
    ensure(v.conclusion == Conclusion::Superheavy, || format!("conclusion {}", v.conclusion))?;

    let f = &doc.field;
    let nv = |s: &str| NovikovElement::parse(s, f).expect("valid literal");
    let ring = QHRing::new(vec![nv("T^(2/1)"), nv("-2*T^(1/1)"), nv("1")]).map_err(|e| e.to_string())?;
    let square = QhSetup { ring, roots: None, binomial: false };
    let out = app(analyze_qh(&square, None))?;
    let v2 = verdict(&solved.report, out.semisimple, out.verified);
    ensure(v2.conclusion == Conclusion::Nondisplaceable, || format!("with (z - T)^2: {}", v2.conclusion))?;
    Ok("superheavy; with (z - T)^2 only nondisplaceable".into())
}

fn check_oracles(doc: &Document) -> Check {
    let tri = parse_document(fixtures::CP2_STANDARD_TORIC).map_err(|e| e.to_string())?;
    let f = &tri.field;
    let out = app(solve_at(&tri, Some(&balanced())))?;
    // brute force over y1, y2 in {1, zeta, zeta^2}
    let mut oracle = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let y = [f.zeta_pow(i), f.zeta_pow(j)];
            if crate::critical::verify_point(&tri.potential, &balanced(), &y).map_err(|e| e.to_string())? {
                oracle.push(y.to_vec());
            }
        }
    }
    let mut found: Vec<_> = out.report.points.iter().map(|p| p.y.clone()).collect();
    found.sort();
    oracle.sort();
    ensure(found.len() == 3 && found == oracle, || format!("triangle points {found:?}, oracle {oracle:?}"))?;

    let classes = app(analyze_classes(doc))?;
    let glued = classes
        .book
        .lattice("CP2_L")
        .and_then(|l| l.class("D4p"))
        .and_then(|c| c.area())
        .map_err(|e| e.to_string())?;
    let configured = doc
        .potential
        .terms()
        .iter()
        .find(|t| t.label.as_deref() == Some("D4p"))
        .map(|t| t.exponent.clone())
        .ok_or("no exotic term labelled D4p")?;
    ensure(glued == configured, || format!("glued area {glued}, configured exponent {configured}"))?;
    Ok(format!("triangle: 3 points y1 = y2 = zeta^i; glued area {glued} matches the exotic exponent"))
}

/// Runs every checklist item against a document given as JSON text.
pub fn run_checklist(text: &str) -> Result<Vec<CheckItem>, AppError> {
    let doc = parse_document(text)?;
    let items: [(u32, &'static str, fn(&Document) -> Check); 9] = [
        (1, "potential matches the four-term expression", check_potential),
        (2, "balanced fiber is (2/3, 2/3)", check_balanced),
        (3, "three critical points, one empty branch", check_critical),
        (4, "Chern, Maslov and area tables", check_chern),
        (5, "self-pairings of the cut loci", check_pairings),
        (6, "index arithmetic and transversality", check_index),
        (7, "semisimple QH with closed-form idempotents", check_qh),
        (8, "verdict", check_verdict),
        (10, "independent oracles", check_oracles),
    ];
    Ok(items
        .into_iter()
        .map(|(id, name, f)| {
            let r = f(&doc);
            CheckItem { id, name, passed: r.is_ok(), detail: r.unwrap_or_else(|e| e) }
        })
        .collect())
}

pub fn checklist_json(items: &[CheckItem]) -> Value {
    Value::Array(
        items
            .iter()
            .map(|i| serde_json::json!({ "id": i.id, "name": i.name, "passed": i.passed, "detail": i.detail }))
            .collect(),
    )
}
