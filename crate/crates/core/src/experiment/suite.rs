use std::fs;
use std::path::Path;

use serde_json::json;

use super::{emit_report, run_experiment, ExperimentConfig, ExperimentError, ExperimentKind, ReportFormat, SpaceSpec};

pub const SUITE_SEED: u64 = 20_240_601;

#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub name: String,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    /// `(name, status)` with status `pass`, `fail` or `error: ...`.
    pub entries: Vec<(String, String)>,
}

impl SuiteOutcome {
    pub fn errors(&self) -> usize {
        self.entries.iter().filter(|e| e.1.starts_with("error")).count()
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.1 == "fail").count()
    }

    /// 0 when everything passed, 1 on any error, 2 on a property failure.
    pub fn exit_code(&self) -> i32 {
        if self.errors() > 0 {
            1
        } else if self.failures() > 0 {
            2
        } else {
            0
        }
    }
}

fn entry(name: &str, kind: ExperimentKind, space: &str, params: serde_json::Value) -> SuiteEntry {
    let mut config = ExperimentConfig::new(kind, SpaceSpec::name(space), SUITE_SEED);
    if let serde_json::Value::Object(m) = params {
        config.parameters = m;
    }
    SuiteEntry { name: name.into(), config }
}

/// The full battery of property checks, one config per check.
pub fn suite_configs() -> Vec<SuiteEntry> {
    use ExperimentKind::*;
    let circles = json!({ "circle_t": [2.0, 4.0, 8.0, 16.0] });
    let mut v = vec![
        entry("curvature-euclidean", Curvature, "euclidean-2", json!({})),
        entry("curvature-minkowski-p1.5", Curvature, "minkowski-p1.5", json!({})),
        entry("curvature-minkowski-p4", Curvature, "minkowski-p4", json!({})),
        entry("curvature-disk", Curvature, "poincare-disk", json!({})),
        entry("curvature-sphere", Curvature, "sphere", json!({})),
        entry("bisector-euclidean", Bisector, "euclidean-2", json!({})),
        entry("bisector-disk", Bisector, "poincare-disk", json!({})),
        entry(
            "bisector-minkowski-p4",
            Bisector,
            "minkowski-p4",
            json!({ "focus_p": [0.0, 0.0], "focus_q": [1.0, 1.0], "expect": "curved" }),
        ),
        entry("perpendicularity-euclidean", Perpendicularity, "euclidean-2", json!({})),
        entry("perpendicularity-disk", Perpendicularity, "poincare-disk", json!({})),
        entry("perpendicularity-minkowski-p4", Perpendicularity, "minkowski-p4", json!({ "expect": "asymmetric" })),
        entry("sphere-convexity-disk", SphereConvexity, "poincare-disk", json!({})),
        entry("sphere-convexity-minkowski-p4", SphereConvexity, "minkowski-p4", json!({})),
        entry("sphere-convexity-hilbert-square", SphereConvexity, "hilbert-square", json!({})),
        entry("horocycle-euclidean", Horocycle, "euclidean-2", circles.clone()),
        entry("horocycle-minkowski-p1.5", Horocycle, "minkowski-p1.5", json!({})),
        entry("horocycle-minkowski-p4", Horocycle, "minkowski-p4", circles.clone()),
        entry("horocycle-minkowski-hexagon", Horocycle, "minkowski-hexagon", json!({})),
        entry("horocycle-disk", Horocycle, "poincare-disk", circles),
        entry("parallels-disk", Parallels, "poincare-disk", json!({ "expect_endpoint": [1.0, 0.0] })),
        entry("parallels-euclidean", Parallels, "euclidean-2", json!({})),
        entry("straightness-hilbert-disk", Straightness, "hilbert-disk", json!({})),
        entry("straightness-hilbert-square", Straightness, "hilbert-square", json!({})),
    ];
    for space in ["euclidean-2", "sphere", "poincare-disk", "minkowski-p4", "hilbert-disk"] {
        v.push(entry(&format!("axioms-{space}"), Axioms, space, json!({})));
    }
    v.push(entry("quadruple-euclidean", Quadruple, "euclidean-2", json!({})));
    v.push(entry(
        "quadruple-unit-square",
        Quadruple,
        "euclidean-2",
        json!({ "matrices": [[1.0, std::f64::consts::SQRT_2, 1.0, 1.0, std::f64::consts::SQRT_2, 1.0]], "expect": true }),
    ));
    v.push(entry(
        "quadruple-triangle-violations",
        Quadruple,
        "euclidean-2",
        json!({ "matrices": [[1.0, 1.0, 3.0, 1.0, 1.0, 1.0], [5.0, 1.0, 1.0, 1.0, 1.0, 1.0]], "expect": false }),
    ));
    v
}

/// Runs every suite config, writing `<name>.csv` and `<name>.json` into
/// `dir` plus a `suite.csv` index.
pub fn run_suite(dir: &Path) -> Result<SuiteOutcome, ExperimentError> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for e in suite_configs() {
        let status = match run_experiment(&e.config) {
            Ok(report) => {
                let prefix = dir.join(&e.name);
                emit_report(&report, ReportFormat::Csv, &prefix)?;
                emit_report(&report, ReportFormat::Json, &prefix)?;
                if report.passed { "pass" } else { "fail" }.to_string()
            }
            Err(err) => format!("error: {err}"),
        };
        entries.push((e.name, status));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(dir.join("suite.csv"))?;
    w.write_record(["name", "status"])?;
    for (n, s) in &entries {
        w.write_record([n, s])?;
    }
    w.flush()?;
    Ok(SuiteOutcome { entries })
}
