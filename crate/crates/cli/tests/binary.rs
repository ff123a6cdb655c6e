use std::path::PathBuf;
use std::process::{Command, Output};

fn samples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilentropy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn sample(name: &str) -> String {
    samples().join(name).to_string_lossy().into_owned()
}

#[test]
fn bound_json_for_cat_matrix() {
    let out = run(&["bound", "--input", &sample("cat_matrix.json"), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "bound");
    assert_eq!(v["bound"]["entropy_bound"].as_f64().unwrap(), 0.9624236501);
    assert_eq!(v["bound"]["char_poly"], serde_json::json!([1, -3, 1]));
    assert_eq!(v["input"]["kind"], "matrix");
}

#[test]
fn heisenberg_reports_blocks() {
    let out = run(&[
        "bound",
        "--input",
        &sample("heisenberg_diag.json"),
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["linearization"]["block_sizes"], serde_json::json!([2, 1]));
    assert_eq!(v["linearization"]["spectral_consistency"], true);
    assert_eq!(v["bound"]["entropy_bound"].as_f64().unwrap(), 3.583518938);
}

#[test]
fn malformed_bracket_exits_nonzero_with_location() {
    let out = run(&["bound", "--input", &sample("bad_bracket.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5: brackets[0]"), "{err}");
}

#[test]
fn missing_file_exits_nonzero() {
    let out = run(&["bound", "--input", "/nonexistent/input.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_out_of_range_is_rejected() {
    let out = run(&[
        "bound",
        "--input",
        &sample("cat_matrix.json"),
        "--tol",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = [
        "simulate",
        "--input",
        &sample("identity_torus.json"),
        "--n-max",
        "6",
        "--epsilon",
        "0.2,0.1",
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("nilentropy-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "bound",
        "--input",
        &sample("plastic_companion.json"),
        "--json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_exits_zero() {
    let out = run(&["verify"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("tau0 = 1.32471795"));
    assert!(text.contains("all suites passed"));
}

#[test]
fn simulate_rejects_matrix_documents() {
    let out = run(&["simulate", "--input", &sample("cat_matrix.json")]);
    assert_eq!(out.status.code(), Some(2));
}
