use std::fs;
use std::path::Path;
use std::process::Command;

use metric_geodesy::experiment::ExperimentReport;
use serde_json::json;

fn run(dir: &Path, config: serde_json::Value, extra: &[&str]) -> (i32, String) {
    let cfg = dir.join("config.json");
    fs::write(&cfg, config.to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_metric-geodesy"))
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("report"))
        .args(extra)
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn curvature(space: &str, params: serde_json::Value) -> serde_json::Value {
    json!({ "experiment": "curvature", "space": space, "seed": 7, "parameters": params })
}

#[test]
fn passing_run_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run(dir.path(), curvature("euclidean-2", json!({ "n_triples": 30 })), &[]);
    assert_eq!(code, 0, "{text}");
    assert!(text.starts_with("pass curvature"));
    assert!(dir.path().join("report.csv").exists());
}

#[test]
fn missing_seed_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run(dir.path(), json!({ "experiment": "curvature", "space": "euclidean-2" }), &[]);
    assert_eq!(code, 1, "{text}");
    assert!(text.contains("seed"));
}

#[test]
fn unknown_experiment_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(dir.path(), json!({ "experiment": "torsion", "space": "euclidean-2", "seed": 1 }), &[]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors_exit_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_metric-geodesy")).arg("bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn wrong_expectation_is_a_property_failure() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run(
        dir.path(),
        curvature("euclidean-2", json!({ "n_triples": 30, "expect": "negative" })),
        &[],
    );
    assert_eq!(code, 2, "{text}");
    assert!(text.starts_with("FAIL"));
}

#[test]
fn repeated_runs_write_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = curvature("poincare-disk", json!({ "n_triples": 30 }));
    run(a.path(), cfg.clone(), &[]);
    run(b.path(), cfg, &[]);
    let read = |d: &Path| fs::read(d.join("report.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn curvature_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), curvature("poincare-disk", json!({ "n_triples": 30 })), &[]);
    let text = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let header = text.lines().find(|l| l.starts_with("triple_id")).unwrap();
    assert_eq!(header, "triple_id,ax,ay,bx,by,cx,cy,margin,verdict");
    let rows = text.lines().skip_while(|l| !l.starts_with("triple_id")).skip(1);
    assert_eq!(rows.filter(|l| !l.is_empty() && !l.starts_with('#')).count(), 30);
}

#[test]
fn horocycle_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "experiment": "horocycle",
        "space": "minkowski-p4",
        "seed": 3,
        "parameters": { "circle_t": [2.0, 4.0] }
    });
    let (code, text) = run(dir.path(), cfg, &["--format", "json"]);
    assert_eq!(code, 0, "{text}");
    let raw = fs::read_to_string(dir.path().join("report.json")).unwrap();
    let report = ExperimentReport::from_json(&raw).unwrap();
    assert_eq!(report.columns, ["sample_id", "x", "y", "busemann_value", "fit_residual"]);
    assert_eq!(report.rows.len(), 41);
    assert!(report.passed);
    assert_eq!(report.to_json().unwrap(), raw);
}
