//! Experiment runner: JSON configs in, deterministic CSV/JSON reports out.

mod report;
mod runs;
mod suite;

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::error::GeoError;
use crate::models::{make_space, DomainSpec, NormSpec, SpaceHandle, SpaceKind};

pub use report::{emit_report, round_sig, Cell, ExperimentReport, ReportFormat, ReportHeader};
pub use suite::{run_suite, suite_configs, SuiteEntry, SuiteOutcome};

pub const TOOL_NAME: &str = "metric-geodesy";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Geo {
        context: String,
        #[source]
        source: GeoError,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    pub(crate) fn geo(context: impl Into<String>) -> impl FnOnce(GeoError) -> ExperimentError {
        let context = context.into();
        move |source| ExperimentError::Geo { context, source }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Curvature,
    Bisector,
    Perpendicularity,
    SphereConvexity,
    Horocycle,
    Parallels,
    Straightness,
    Axioms,
    Quadruple,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Curvature => "curvature",
            ExperimentKind::Bisector => "bisector",
            ExperimentKind::Perpendicularity => "perpendicularity",
            ExperimentKind::SphereConvexity => "sphere-convexity",
            ExperimentKind::Horocycle => "horocycle",
            ExperimentKind::Parallels => "parallels",
            ExperimentKind::Straightness => "straightness",
            ExperimentKind::Axioms => "axioms",
            ExperimentKind::Quadruple => "quadruple",
        }
    }
}

/// Exponent of an l^p norm; JSON has no infinity, so `"inf"` is accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Value(f64),
    Named(String),
}

impl Exponent {
    fn value(&self) -> Result<f64, ExperimentError> {
        match self {
            Exponent::Value(p) => Ok(*p),
            Exponent::Named(s) if s == "inf" => Ok(f64::INFINITY),
            Exponent::Named(s) => Err(ExperimentError::Config(format!("bad exponent {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescription {
    pub kind: SpaceKind,
    #[serde(default = "two")]
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    /// Unit-ball vertices of a polygonal norm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_polygon: Option<Vec<[f64; 2]>>,
    /// Vertices of a polygonal Hilbert domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_polygon: Option<Vec<[f64; 2]>>,
    /// Semi-axes of an elliptic Hilbert domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ellipse: Option<[f64; 2]>,
    /// Unit ball for `minkowski-plane`, domain for `hilbert`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<Vec<[f64; 2]>>,
}

fn two() -> usize {
    2
}

/// A space given by name (`"euclidean-2"`, `"sphere"`, `"poincare-disk"`,
/// `"minkowski-p4"`, `"minkowski-hexagon"`, `"hilbert-disk"`,
/// `"hilbert-square"`) or by a full description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Name(String),
    Described(SpaceDescription),
}

/// Counterclockwise regular hexagon, the unit ball of a polygonal norm.
pub fn hexagon() -> Vec<[f64; 2]> {
    (0..6)
        .map(|k| {
            let a = std::f64::consts::PI / 3.0 * k as f64 + 0.1;
            [a.cos(), a.sin()]
        })
        .collect()
}

impl SpaceSpec {
    pub fn name(s: &str) -> SpaceSpec {
        SpaceSpec::Name(s.into())
    }

    pub fn build(&self) -> Result<SpaceHandle, ExperimentError> {
        let geo = |e: GeoError| ExperimentError::Config(format!("invalid space: {e}"));
        match self {
            SpaceSpec::Name(n) => match n.as_str() {
                "euclidean-2" | "euclidean" => SpaceHandle::euclidean(2).map_err(geo),
                "euclidean-3" => SpaceHandle::euclidean(3).map_err(geo),
                "sphere" => Ok(SpaceHandle::sphere()),
                "poincare-disk" | "hyperbolic-disk" => Ok(SpaceHandle::poincare_disk()),
                "minkowski-hexagon" => SpaceHandle::minkowski_polygon(hexagon()).map_err(geo),
                "hilbert-disk" => Ok(SpaceHandle::hilbert_unit_disk()),
                "hilbert-square" => Ok(SpaceHandle::hilbert_unit_square()),
                other => match other.strip_prefix("minkowski-p") {
                    Some("inf") => SpaceHandle::minkowski_p(f64::INFINITY).map_err(geo),
                    Some(p) => {
                        let p: f64 = p
                            .parse()
                            .map_err(|_| ExperimentError::Config(format!("unknown space {other:?}")))?;
                        SpaceHandle::minkowski_p(p).map_err(geo)
                    }
                    None => Err(ExperimentError::Config(format!("unknown space {other:?}"))),
                },
            },
            SpaceSpec::Described(d) => {
                let mut d = d.clone();
                if let Some(v) = d.polygon.take() {
                    let slot = match d.kind {
                        SpaceKind::MinkowskiPlane => &mut d.norm_polygon,
                        SpaceKind::Hilbert => &mut d.domain_polygon,
                        _ => return Err(ExperimentError::Config(format!("polygon given for {:?}", d.kind))),
                    };
                    if slot.replace(v).is_some() {
                        return Err(ExperimentError::Config("polygon given twice".into()));
                    }
                }
                let norm = match (&d.p, &d.norm_polygon) {
                    (Some(p), None) => Some(NormSpec::P(p.value()?)),
                    (None, Some(v)) => Some(NormSpec::Polygon(v.clone())),
                    (None, None) => None,
                    _ => return Err(ExperimentError::Config("give either p or norm_polygon".into())),
                };
                let domain = match (&d.domain_polygon, &d.ellipse) {
                    (Some(v), None) => Some(DomainSpec::Polygon(v.clone())),
                    (None, Some([a, b])) => Some(DomainSpec::Ellipse { a: *a, b: *b }),
                    (None, None) => None,
                    _ => return Err(ExperimentError::Config("give either domain_polygon or ellipse".into())),
                };
                make_space(d.kind, d.dim, norm, domain).map_err(geo)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Closed-form quantities.
    pub closed_form: f64,
    /// Solver-produced quantities.
    pub solver: f64,
    /// Band around zero for curvature margins.
    pub verdict: f64,
    /// Cauchy gap for Busemann limits.
    pub busemann: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            closed_form: 1e-9,
            solver: 1e-6,
            verdict: 1e-7,
            busemann: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub space: SpaceSpec,
    #[serde(default)]
    pub parameters: Map<String, Value>,
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Output prefix; not echoed into reports.
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, space: SpaceSpec, seed: u64) -> Self {
        ExperimentConfig {
            experiment,
            space,
            parameters: Map::new(),
            seed,
            tolerances: Tolerances::default(),
            output: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    pub fn from_json(s: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(s).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub(crate) fn params<T: DeserializeOwned>(&self) -> Result<T, ExperimentError> {
        serde_json::from_value(Value::Object(self.parameters.clone()))
            .map_err(|e| ExperimentError::Config(format!("{} parameters: {e}", self.experiment.as_str())))
    }
}

/// Validates the config, runs the experiment and assembles its report.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    let space = config.space.build()?;
    let out = match config.experiment {
        ExperimentKind::Curvature => runs::curvature(config, &space)?,
        ExperimentKind::Bisector => runs::bisector(config, &space)?,
        ExperimentKind::Perpendicularity => runs::perpendicularity(config, &space)?,
        ExperimentKind::SphereConvexity => runs::sphere_convexity(config, &space)?,
        ExperimentKind::Horocycle => runs::horocycle(config, &space)?,
        ExperimentKind::Parallels => runs::parallels(config, &space)?,
        ExperimentKind::Straightness => runs::straightness(config, &space)?,
        ExperimentKind::Axioms => runs::axioms(config, &space)?,
        ExperimentKind::Quadruple => runs::quadruple(config, &space)?,
    };
    let mut summary = out.summary;
    summary.insert("passed".into(), Cell::Bool(out.passed));
    Ok(ExperimentReport {
        header: ReportHeader {
            tool: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            experiment: config.experiment,
            space: space.name(),
            seed: config.seed,
            tolerances: config.tolerances,
            config: config.clone(),
        },
        columns: out.columns,
        rows: out.rows,
        summary,
        failures: out.failures,
        passed: out.passed,
    })
}
