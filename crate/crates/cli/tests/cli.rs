use std::process::{Command, Output};

use qdouble_core::export::{import_uqb, scalar_from_json};
use qdouble_core::{build_uqb, Algebra, CartanType};
use serde_json::Value;

fn qdouble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdouble"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn verify_a1_all_passes() {
    let o = qdouble(&["verify", "--type", "A1", "--n", "3", "--checks", "all", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 9);
    assert!(checks.iter().all(|c| c["status"] == "pass"), "{report}");
    assert!(report["scope"].as_str().unwrap().contains("not checked"));
}

#[test]
fn a2_n3_is_rejected() {
    let o = qdouble(&["verify", "--type", "A2", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gcd(n, det)=3"), "{}", stderr(&o));
}

#[test]
fn other_parameter_errors() {
    assert_eq!(qdouble(&["verify", "--type", "A1", "--n", "4"]).status.code(), Some(2));
    assert_eq!(qdouble(&["verify", "--type", "B2", "--n", "3"]).status.code(), Some(2));
    assert_eq!(qdouble(&["verify", "--type", "A1", "--n", "3", "--checks", "nope"]).status.code(), Some(2));
    assert_eq!(qdouble(&["verify"]).status.code(), Some(2));
}

#[test]
fn associator_check_term_count() {
    let o = qdouble(&["verify", "--type", "A1", "--n", "3", "--checks", "lemma32", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["checks"][0]["details"]["phi_terms"], 27);
}

#[test]
fn empty_check_list_prints_header_only() {
    let o = qdouble(&["verify", "--type", "A1", "--n", "3", "--checks", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn double_checks_skipped_elsewhere() {
    let o = qdouble(&[
        "verify", "--type", "A1", "--n", "5", "--checks", "double-twist,r-matrix", "--format", "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for c in report["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "skipped");
    }
}

#[test]
fn structured_output_is_deterministic() {
    let args = [
        "verify", "--type", "A1", "--n", "3", "--checks", "lemma31,lemma32,pentagon,cocycle-nontrivial,theorem33-dim",
        "--seed", "17", "--jobs", "1", "--format", "structured",
    ];
    let a = qdouble(&args);
    let b = qdouble(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

fn export_doc(t: &str, n: &str, what: &str) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = qdouble(&["export", "--type", t, "--n", n, "--what", what, "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

#[test]
fn export_counts() {
    assert_eq!(export_doc("A1", "3", "Aq")["entries"].as_array().unwrap().len(), 27);
    assert_eq!(export_doc("A1", "3", "J")["entries"].as_array().unwrap().len(), 81);
    let phi = export_doc("A1", "3", "Phi");
    assert_eq!(phi["schema_version"], 1);
    let entries = phi["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 27);
    for e in entries {
        let c = scalar_from_json(&e["scalar"]).unwrap();
        assert_eq!(c.as_zeta_power().expect("root of unity") % 3, 0);
        assert_eq!(e["scalar"]["coeffs"].as_array().unwrap().len(), 6);
    }
    let gens = export_doc("A1", "3", "double-generators");
    assert_eq!(gens["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn export_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    let p = path.to_str().unwrap();
    assert_eq!(qdouble(&["export", "--type", "A2", "--n", "5", "--what", "double-generators", "--out", p]).status.code(), Some(2));
    assert_eq!(qdouble(&["export", "--type", "A1", "--n", "3", "--what", "nothing", "--out", p]).status.code(), Some(2));
    assert_eq!(qdouble(&["export", "--type", "A2", "--n", "3", "--what", "uqb", "--out", p]).status.code(), Some(2));
}

#[test]
fn exported_rules_reproduce_multiplication() {
    let doc = export_doc("A2", "5", "uqb");
    let rebuilt = import_uqb(&doc).unwrap();
    let original = build_uqb(CartanType::A2, 5).unwrap();
    let basis: Vec<_> = (0..40u32)
        .map(|i| original.monomial(&[i % 25, (7 * i) % 25], &[i % 4, (i / 2) % 3, (i / 3) % 5]))
        .collect();
    for a in &basis {
        for b in basis.iter().step_by(3) {
            assert_eq!(rebuilt.mul_basis(a, b), original.mul_basis(a, b));
        }
    }
}
