use std::path::PathBuf;
use std::process::{Command, Output};

use qlie::{Report, StructureFile};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn qlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlie")).args(args).env("QLIE_THREADS", "2").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn passing_file_exits_zero() {
    let o = qlie(&["all", "--instance", &fixture("scalar_pass.json")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("result: PASS"));
}

#[test]
fn malformed_file_exits_one() {
    let o = qlie(&["validate", "--instance", &fixture("malformed.json")]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed"));
}

#[test]
fn lambda_minus_one_exits_one() {
    let o = qlie(&["validate", "--instance", &fixture("lambda_minus_one.json")]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("lambda = -1"));
}

#[test]
fn missing_file_and_bad_builtin_exit_one() {
    assert_eq!(code(&qlie(&["validate", "--instance", "/nonexistent/x.json"])), 1);
    assert_eq!(code(&qlie(&["validate", "--instance", "classical:x"])), 1);
    assert_eq!(code(&qlie(&["nonsense"])), 1);
}

#[test]
fn failing_instance_exits_two() {
    let o = qlie(&["validate", "--instance", &fixture("scalar_fail.json"), "--format", "json"]);
    assert_eq!(code(&o), 2);
    let r = Report::from_json(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert!(!r.passed);
    assert!(r.failures().any(|e| e.id == "rtilde_inverse"));
}

#[test]
fn json_report_round_trips() {
    let o = qlie(&["brackets", "--instance", "graded:2:+-", "--format", "json", "--max-len", "1", "--pairing-order", "1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let r = Report::from_json(&text).unwrap();
    assert_eq!(r.max_len, 1);
    assert_eq!(r.pairing_order, 1);
    assert_eq!(r.instance.dim, 6);
    assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    assert_eq!(r.to_json().trim(), text.trim());
}

#[test]
fn float_instance_with_tolerance_override() {
    let o = qlie(&["relations", "--instance", &fixture("scalar_float.json"), "--tol", "1e-8", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = Report::from_json(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert_eq!(r.instance.arithmetic, "float");
    assert_eq!(r.instance.tolerance, Some(1e-8));
}

#[test]
fn strict_extended_warns_and_adds_nothing() {
    let plain = qlie(&["validate", "--instance", "classical:2", "--format", "json"]);
    let strict = qlie(&["validate", "--instance", "classical:2", "--format", "json", "--strict-extended"]);
    assert_eq!(code(&strict), 0);
    assert!(String::from_utf8_lossy(&strict.stderr).contains("warning"));
    let a = Report::from_json(&String::from_utf8_lossy(&plain.stdout)).unwrap();
    let b = Report::from_json(&String::from_utf8_lossy(&strict.stdout)).unwrap();
    assert_eq!(a.entries().count(), b.entries().count());
    assert!(b.strict_extended);
}

#[test]
fn emit_writes_structure_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sc.json");
    let o = qlie(&["emit", "--instance", "scalar1:1/2:-3/2:1:2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let f = StructureFile::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(f.dim, 2);
    assert_eq!(f.sigma.len(), 16);
    assert_eq!(f.forms, vec!["Theta[0,0]", "Pi[0]"]);
    assert!(!f.structure_constants.is_empty());
    assert_eq!(StructureFile::from_json(&f.to_json()).unwrap(), f);
}

#[test]
fn emit_to_stdout_for_classical_is_empty() {
    let o = qlie(&["emit", "--instance", "classical:2"]);
    assert_eq!(code(&o), 0);
    let f = StructureFile::from_json(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert!(f.structure_constants.is_empty());
}

#[test]
fn emit_refuses_invalid_instance() {
    let o = qlie(&["emit", "--instance", &fixture("scalar_fail.json")]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains("result: FAIL"));
}
