use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use floerpot::fixtures;

fn floerpot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floerpot")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

/// Writes `text` to a file private to this test process.
fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("floerpot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn semitoric_with(edit: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(fixtures::CP2_SEMITORIC).unwrap();
    edit(&mut v);
    v.to_string()
}

#[test]
fn checklist_passes_on_bundled_document() {
    let o = floerpot(&["verify-paper"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 9);
    assert!(text.ends_with("all 9 checks passed\n"));
}

#[test]
fn exotic_count_one_fails_the_potential_item() {
    let path = scratch("exotic1.json", &semitoric_with(|v| v["potential"]["extra_terms"][0]["count"] = 1.into()));
    let o = floerpot(&["verify-paper", "--config", path.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["passed"], false);
    let items = v["items"].as_array().unwrap();
    assert_eq!(items[0]["id"], 1);
    assert_eq!(items[0]["passed"], false);
    // the potential is wrong but the solver still runs on it
    let solved = floerpot(&["solve", path.to_str().unwrap(), "--json"]);
    assert_eq!(code(&solved), 0, "{}", stderr(&solved));
}

#[test]
fn rationals_need_a_field_extension() {
    let path = scratch("order1.json", &semitoric_with(|v| v["coefficient_field"]["cyclotomic_order"] = 1.into()));
    let o = floerpot(&["verify-paper", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    let critical = text.lines().find(|l| l.starts_with("[FAIL]  3.")).expect("item 3 fails");
    assert!(critical.contains("needs field extension") && critical.contains("cyclotomic order 3"), "{critical}");

    let o = floerpot(&["solve", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).starts_with("error [math-domain]: "), "{}", stderr(&o));
    assert!(stderr(&o).contains("cyclotomic order 3"));
}

#[test]
fn configuration_errors_exit_2() {
    let bad = scratch("bad.json", "{ \"name\": ");
    let o = floerpot(&["check-polytope", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let o = floerpot(&["potential", "no-such-file.json"]);
    assert_eq!(code(&o), 2);

    let unknown = scratch("unknown.json", &semitoric_with(|v| v["colour"] = "blue".into()));
    assert_eq!(code(&floerpot(&["check-polytope", unknown.to_str().unwrap()])), 2);

    let o = floerpot(&["solve", "cp2_semitoric", "--at", "two,thirds"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--at"));

    assert_eq!(code(&floerpot(&["qh", "cp2_semitoric", "--precision", "lots"])), 2);
    assert_eq!(code(&floerpot(&["frobnicate"])), 2);
}

#[test]
fn unbalanced_fiber_is_a_math_domain_error() {
    let o = floerpot(&["solve", "cp2_semitoric", "--at", "1/2,1/2"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("not balanced"), "{}", stderr(&o));
}

#[test]
fn precision_errors_exit_4_and_suggest_more() {
    let doc = semitoric_with(|v| {
        // (z - 1)(z - 1 - T)(z - 2)
        v["qh_ring"] = serde_json::json!({
            "coefficients": ["-2 + -2*T^(1/1)", "5 + 3*T^(1/1)", "-4 + -1*T^(1/1)", "1"],
            "binomial": false
        });
    });
    let path = scratch("precision.json", &doc);
    let o = floerpot(&["qh", path.to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", stdout(&o));
    assert!(stderr(&o).starts_with("error [precision]: "), "{}", stderr(&o));
    let o = floerpot(&["qh", path.to_str().unwrap(), "--precision", "8", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["semisimple"], true);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        &["report", "cp2_semitoric", "--json"][..],
        &["report", "cp2_semitoric"][..],
        &["solve", "cp2_standard_toric", "--json"][..],
        &["classes", "cp2_semitoric", "--json"][..],
        &["verify-paper", "--json"][..],
    ] {
        let (a, b) = (floerpot(args), floerpot(args));
        assert_eq!(code(&a), 0, "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn report_concludes_superheavy() {
    let o = floerpot(&["report", "cp2_semitoric", "--json"]);
    let v = json(&o);
    assert_eq!(v["verdict"]["conclusion"], "superheavy");
    assert_eq!(v["verdict"]["has_critical_point"], true);
    assert_eq!(v["solve"]["points"].as_array().unwrap().len(), 3);
    assert!(stdout(&floerpot(&["report", "cp2_semitoric"])).contains("verdict: superheavy"));
}

#[test]
fn square_modulus_is_only_nondisplaceable() {
    let doc = semitoric_with(|v| {
        v["qh_ring"] = serde_json::json!({ "coefficients": ["T^(2/1)", "-2*T^(1/1)", "1"] });
    });
    let path = scratch("square.json", &doc);
    let v = json(&floerpot(&["report", path.to_str().unwrap(), "--json"]));
    assert_eq!(v["verdict"]["conclusion"], "nondisplaceable");
    assert_eq!(v["verdict"]["qh_semisimple"], false);
}

#[test]
fn s2s2_balanced_fiber_is_the_centre() {
    let o = floerpot(&["check-polytope", "s2s2_semitoric", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["balanced"]["kind"], "unique");
    assert_eq!(v["balanced"]["point"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(v["balanced"]["interior"], true);
}

#[test]
fn triangle_has_three_critical_points() {
    let v = json(&floerpot(&["solve", "cp2_standard_toric", "--json", "--at", "2/3,2/3"]));
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    assert!(points.iter().all(|p| p["verified"] == true && p["y"][0] == p["y"][1]));
}

#[test]
fn fixture_files_match_bundled_names() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/cp2_semitoric.json");
    let by_path = floerpot(&["potential", path, "--json"]);
    let by_name = floerpot(&["potential", "cp2_semitoric", "--json"]);
    assert_eq!(code(&by_path), 0);
    assert_eq!(by_path.stdout, by_name.stdout);
}

#[test]
fn potential_text_uses_affine_exponents() {
    let o = floerpot(&["potential", "cp2_semitoric"]);
    assert!(stdout(&o).contains("T^(u1)*y1 + T^(u2)*y2 + T^(4-u1-4*u2)*y1^-1*y2^-4 + 2*T^(2-2*u2)*y2^-2"));
}
