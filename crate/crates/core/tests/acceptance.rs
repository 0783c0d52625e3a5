//! Acceptance checklist for the semitoric `CP^2` document. Prints one line per
//! criterion and exits nonzero if any fails.

mod support;

use std::process::ExitCode;

use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;

use floerpot::classes::{at_check, fredholm_index, normal_chern, Functional, FunctionalValue, GluingPiece, GluingRule};
use floerpot::config::{parse_document, Document};
use floerpot::critical::{verify_point, EmptyReason};
use floerpot::cyclotomic::Cyclotomic;
use floerpot::fixtures;
use floerpot::novikov::NovikovElement;
use floerpot::pipeline::{analyze_classes, analyze_qh, balanced_fiber, full_report, solve_at};
use floerpot::polytope::{AffineExponent, BalancedFiber, FiberPoint};
use floerpot::qh::Conclusion;
use floerpot::rational::{int, rat, Rational};
use support::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn balanced() -> FiberPoint {
    FiberPoint(vec![rat(2, 3), rat(2, 3)])
}

fn affine(c: i64, g1: i64, g2: i64) -> AffineExponent {
    AffineExponent::new(int(c), vec![int(g1), int(g2)])
}

/// The four-term potential written out by hand: (count, exponent, monomial).
fn expected_terms() -> Vec<(u64, AffineExponent, Vec<i64>)> {
    vec![
        (1, affine(0, 1, 0), vec![1, 0]),
        (1, affine(0, 0, 1), vec![0, 1]),
        (1, affine(4, -1, -4), vec![-1, -4]),
        (2, affine(2, 0, -2), vec![0, -2]),
    ]
}

fn potential_reproduction(doc: &Document) -> Outcome {
    let f = &doc.field;
    let mut got: Vec<(Cyclotomic, AffineExponent, Vec<i64>)> =
        doc.potential.terms().iter().map(|t| (t.weight(), t.exponent.clone(), t.monomial.clone())).collect();
    let mut want: Vec<_> = expected_terms().into_iter().map(|(c, e, m)| (f.from_int(c as i64), e, m)).collect();
    got.sort();
    want.sort();
    ensure!(got == want, "terms {got:?}");
    let text = doc.potential.to_string();
    ensure!(
        text == "T^(u1)*y1 + T^(u2)*y2 + T^(4-u1-4*u2)*y1^-1*y2^-4 + 2*T^(2-2*u2)*y2^-2",
        "rendered as {text}"
    );
    Ok(text)
}

fn balanced_fiber_is_two_thirds(doc: &Document) -> Outcome {
    let BalancedFiber::Unique { point, level } = balanced_fiber(doc).map_err(err)? else {
        return Err("balanced fiber is not unique".into());
    };
    ensure!(point == balanced(), "balanced fiber {point}");
    for (_, e, _) in expected_terms() {
        ensure!(e.eval(&point) == rat(2, 3), "exponent {e} is {} at {point}", e.eval(&point));
    }
    ensure!(level == rat(2, 3), "common level {level}");
    Ok(format!("u = {point}, every exponent equals 2/3"))
}

fn critical_points(doc: &Document) -> Outcome {
    let f = &doc.field;
    let out = solve_at(doc, Some(&balanced())).map_err(err)?;
    let r = &out.report;
    ensure!(r.points.len() == 3, "{} points", r.points.len());
    ensure!(r.unresolved.is_empty(), "unresolved: {:?}", r.unresolved);
    let z = f.zeta_pow(1);
    let quarter = f.from_rational(rat(1, 4));
    let two = f.from_int(2);
    let mut want = vec![
        vec![quarter.clone(), two.clone()],
        vec![&quarter * &z.pow(-2).unwrap(), &two * &z],
        vec![&quarter * &z.pow(-4).unwrap(), &two * &z.pow(2).unwrap()],
    ];
    let mut got: Vec<_> = r.points.iter().map(|p| p.y.clone()).collect();
    got.sort();
    want.sort();
    ensure!(got == want, "points {got:?}");
    // the two critical equations at the balanced fiber, written out by hand
    let eq1 = |y: &[Cyclotomic]| &f.one() - &eval_monomial(y, &[-2, -4]);
    let eq2 = |y: &[Cyclotomic]| {
        &(&f.one() - &(&f.from_int(4) * &eval_monomial(y, &[-1, -5]))) - &(&f.from_int(4) * &eval_monomial(y, &[0, -3]))
    };
    for y in &got {
        ensure!(eval_monomial(y, &[1, 2]).is_one(), "y1*y2^2 != 1 at {y:?}");
        ensure!(eval_monomial(y, &[0, 3]) == f.from_int(8), "y2^3 != 8 at {y:?}");
        ensure!(eq1(y).is_zero() && eq2(y).is_zero(), "equations fail at {y:?}");
        ensure!(verify_point(&doc.potential, &balanced(), y).map_err(err)?, "verify_point rejects {y:?}");
    }
    ensure!(r.empty.len() == 1, "{} empty branches", r.empty.len());
    let e = &r.empty[0];
    ensure!(e.branch.to_string() == "y1*y2^2 = -1", "empty branch {}", e.branch);
    ensure!(e.reason == EmptyReason::ResidualConstant(f.one()), "empty because {}", e.reason);
    Ok("3 points on y1*y2^2 = 1, y2^3 = 8; branch y1*y2^2 = -1 empty with residual 1".into())
}

fn piece(lattice: &str, class: String, multiplicity: i64) -> GluingPiece {
    GluingPiece { lattice: lattice.into(), class, multiplicity }
}

fn chern_tables(doc: &Document) -> Outcome {
    let seeds = doc.classes.as_ref().ok_or("no class lattices")?;
    let out = analyze_classes(doc).map_err(err)?;
    let f4 = out.book.lattice("F4").map_err(err)?;
    let c1 = |s: &str| f4.class(s).and_then(|x| x.chern()).map_err(err);
    // e1 = D2 + D4, e2 = D1 + 4 D2 + D3 with seeds (1, 1, 1, 0)
    ensure!(c1("e1")? == 1 + 0, "c1(e1) = {}", c1("e1")?);
    ensure!(c1("e3")? == 1, "c1(e3) = {}", c1("e3")?);
    ensure!(c1("e2")? == 1 + 4 + 1, "c1(e2) = {}", c1("e2")?);
    for k in 1..=5i64 {
        let rule = GluingRule {
            name: format!("{k}H = {k}Hp # {m}D4 # {m}D2", m = 2 * k),
            pieces: vec![piece("X1", format!("{k}*Hp"), 1), piece("F4", "D4".into(), 2 * k), piece("F4", "D2".into(), 2 * k)],
            result: piece("CP2", format!("{k}*H"), 1),
        };
        let sol = seeds.glue(&rule, Functional::Chern).map_err(err)?;
        // 3k = c1(kHp) + 2k*0 + 2k*1
        ensure!(sol.pieces[0].value == FunctionalValue::Integer(3 * k - 2 * k), "c1({k}Hp) = {}", sol.pieces[0].value);
    }
    let direct = seeds.glue(seeds.rule("H = Hp # 2e1").ok_or("missing rule")?, Functional::Chern).map_err(err)?;
    ensure!(direct.pieces[0].value == FunctionalValue::Integer(1), "c1(Hp) via e1 = {}", direct.pieces[0].value);
    let d4p = out.book.lattice("CP2_L").and_then(|l| l.class("D4p")).map_err(err)?;
    ensure!(d4p.maslov().map_err(err)? == 2, "maslov(D4p) = {}", d4p.maslov().map_err(err)?);
    let area = d4p.area().map_err(err)?;
    ensure!(area == affine(2, 0, -2), "area(D4p) = {area}");
    Ok(format!("c1(e1) = c1(e3) = 1, c1(e2) = 6, c1(kHp) = k for k = 1..5, maslov(D4p) = 2, area(D4p) = {area}"))
}

fn pairing_table(doc: &Document) -> Outcome {
    let f4 = f4(doc);
    let self_pair = |s: &str| f4.class(s).and_then(|x| x.pair(s)).map_err(err);
    let (e2, e4) = (self_pair("e2")?, self_pair("e4")?);
    ensure!(e2 == 4 && e4 == -4, "e2.e2 = {e2}, e4.e4 = {e4}");
    Ok("e2.e2 = 4, e4.e4 = -4".into())
}

fn index_arithmetic(doc: &Document) -> Outcome {
    let out = analyze_classes(doc).map_err(err)?;
    // (chi, c1, puncture contribution, boundary circles, Z(du)) in complex dimension 2,
    // genus 0, no even punctures, every CZ index zero
    let hand: [(i64, i64, i64, i64, i64); 3] = [
        (2 - 1 - 1, 0, -(0 - 1), 1, 0),
        (2 - 1, 1, 0 + 1, 0, 0),
        (2 - 1, 2, 0, 1, 1),
    ];
    let mut rows = Vec::new();
    for ((chi, c1, punct, boundary, z), row) in hand.iter().zip(&out.index_rows) {
        let ind = -chi + 2 * c1 + punct;
        let cn = Rational::new((ind - 2 + boundary).into(), 2.into());
        ensure!(row.index == int(ind) && row.normal_chern == cn, "{}: ({}, {})", row.name, row.index, row.normal_chern);
        ensure!(row.transversal && int(ind) > &cn + int(*z), "{} fails automatic transversality", row.name);
        rows.push(format!("({}, {})", row.index, row.normal_chern));
    }
    ensure!(out.index_rows.len() == 3, "{} index rows", out.index_rows.len());
    ensure!(rows == ["(1, 0)", "(2, 0)", "(3, 1)"], "rows {rows:?}");
    let ind = fredholm_index(2, 1, 2, &[]);
    ensure!(ind == int(3) && normal_chern(&ind, 0, 0, 1) == int(1) && at_check(&ind, &int(1), 1), "direct call disagrees");
    Ok(format!("(ind, c_N) = {}, all transversal", rows.join(", ")))
}

fn qh_idempotents(doc: &Document) -> Outcome {
    let f = &doc.field;
    let setup = doc.qh.as_ref().ok_or("no qh_ring")?;
    let ring = &setup.ring;
    ensure!(ring.is_semisimple(None).map_err(err)?, "z^3 - T is not semisimple");
    let out = analyze_qh(setup, None).map_err(err)?;
    let roots = out.roots.clone().ok_or("no roots")?;
    let mut want: Vec<_> = (0..3).map(|i| NovikovElement::monomial(f.zeta_pow(i), rat(1, 3))).collect();
    let mut got = roots.clone();
    got.sort_by_key(|r| r.to_string());
    want.sort_by_key(|r| r.to_string());
    ensure!(got == want, "roots {got:?}");
    let es = out.idempotents.ok_or("no idempotents")?;
    ensure!(out.verified && ring.verify_idempotents(&es), "idempotents fail verification");
    for (e, eps) in es.iter().zip(&roots) {
        // (1/3) eps^-2 (z^2 + eps z + eps^2), with eps^-2 = zeta^-2i T^(-2/3)
        let (c, _) = eps.terms().first().map(|t| (t.coeff.clone(), ())).unwrap();
        let inv2 = NovikovElement::monomial(&c.pow(-2).unwrap() * &f.from_rational(rat(1, 3)), rat(-2, 3));
        let closed = [&inv2 * &eps.pow(2), &inv2 * eps, inv2.clone()];
        ensure!(e.coeffs() == &closed[..], "idempotent {e} for root {eps}");
        ensure!(eval_element(e, eps).is_one(), "e({eps}) != 1");
    }
    Ok("semisimple, 3 verified idempotents equal to (1/3)eps^-2(z^2 + eps*z + eps^2)".into())
}

fn with_square_qh() -> Result<Document, String> {
    let mut v: Value = serde_json::from_str(fixtures::CP2_SEMITORIC).map_err(err)?;
    v["qh_ring"] = serde_json::json!({ "coefficients": ["T^(2/1)", "-2*T^(1/1)", "1"], "binomial": false });
    parse_document(&v.to_string()).map_err(err)
}

fn verdicts(doc: &Document) -> Outcome {
    let (_, v) = full_report(doc, None, None).map_err(err)?;
    ensure!(v.conclusion == Conclusion::Superheavy, "conclusion {}", v.conclusion);
    let square = with_square_qh()?;
    let ring = &square.qh.as_ref().unwrap().ring;
    ensure!(!ring.is_semisimple(None).map_err(err)?, "(z - T)^2 reported semisimple");
    let (_, v2) = full_report(&square, None, None).map_err(err)?;
    ensure!(v2.conclusion == Conclusion::Nondisplaceable, "with (z - T)^2: {}", v2.conclusion);
    ensure!(v2.has_critical_point && !v2.qh_semisimple, "verdict flags {v2:?}");
    Ok("superheavy; nondisplaceable only with (z - T)^2".into())
}

fn run<S: proptest::strategy::Strategy>(name: &str, s: S, f: impl Fn(S::Value) -> Check) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&s, f).map_err(|e| format!("{name}: {e}"))
}

fn property_suites(doc: &Document) -> Outcome {
    run("ultrametric", novikov_pair(), |(a, b)| check_ultrametric(&a, &b))?;
    run("valuation multiplicativity", nonzero_pair(), |(a, b)| check_multiplicativity(&a, &b))?;
    run("novikov ring axioms", novikov_triple(), |(a, b, c)| check_novikov_ring(&a, &b, &c))?;
    run("qh ring axioms", qh_triple(), |(r, a, b, c)| check_qh_ring(&r, &a, &b, &c))?;
    run("invert precision", invert_case(), |(a, n)| check_invert(&a, &n))?;
    run("solver soundness", random_system(), |s| check_solver_sound(&s))?;
    run("planted binomial systems", planted_system(), |p| check_planted(&p))?;
    let lattice = f4(doc);
    run("normalize linearity", (f4_combination(), f4_combination()), |(a, b)| check_normalize_linear(lattice, &a, &b))?;
    Ok(format!("8 suites x {CASES} cases"))
}

fn independent_oracles(doc: &Document) -> Outcome {
    let tri = parse_document(fixtures::CP2_STANDARD_TORIC).map_err(err)?;
    let f = &tri.field;
    let out = solve_at(&tri, Some(&balanced())).map_err(err)?;
    // brute force: both equations 1 - y1^-2 y2^-1 and 1 - y1^-1 y2^-2 over all pairs of cube roots of unity
    let mut oracle = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let y = vec![f.zeta_pow(i), f.zeta_pow(j)];
            if eval_monomial(&y, &[2, 1]).is_one() && eval_monomial(&y, &[1, 2]).is_one() {
                oracle.push(y);
            }
        }
    }
    let mut found: Vec<_> = out.report.points.iter().map(|p| p.y.clone()).collect();
    found.sort();
    oracle.sort();
    ensure!(found.len() == 3 && found == oracle, "triangle points {found:?}, oracle {oracle:?}");
    ensure!(found.iter().all(|y| y[0] == y[1]), "points off the diagonal");

    let classes = analyze_classes(doc).map_err(err)?;
    let glued = classes.book.lattice("CP2_L").and_then(|l| l.class("D4p")).and_then(|c| c.area()).map_err(err)?;
    let configured: Value = serde_json::from_str(fixtures::CP2_SEMITORIC).map_err(err)?;
    let exponent = configured["potential"]["extra_terms"][0]["exponent"].as_str().ok_or("no exotic exponent")?;
    let configured = AffineExponent::parse(exponent, 2).map_err(err)?;
    ensure!(glued == configured, "glued area {glued}, configured {configured}");
    Ok(format!("triangle points y1 = y2 = zeta^i; glued area {glued} equals the configured exponent"))
}

fn main() -> ExitCode {
    let doc = semitoric_document();
    let criteria: [(&str, fn(&Document) -> Outcome); 10] = [
        ("potential reproduction", potential_reproduction),
        ("balanced fiber", balanced_fiber_is_two_thirds),
        ("critical points", critical_points),
        ("chern and maslov tables", chern_tables),
        ("pairing table", pairing_table),
        ("index arithmetic", index_arithmetic),
        ("quantum cohomology", qh_idempotents),
        ("verdict", verdicts),
        ("property suites", property_suites),
        ("independent oracles", independent_oracles),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check(&doc) {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria fail");
        ExitCode::FAILURE
    }
}
