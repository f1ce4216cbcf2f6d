use thiserror::Error;

use crate::point::ChartKind;

pub type Result<T> = std::result::Result<T, GeoError>;

/// Failures raised by the geometric operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeoError {
    #[error("chart mismatch: space uses {expected}, point is in {found}")]
    ChartMismatch { expected: ChartKind, found: ChartKind },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("ambiguous geodesic: {0}")]
    AmbiguousGeodesic(String),

    #[error("ambiguous midpoint: {0}")]
    AmbiguousMidpoint(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("unsupported dimension {dim} for {kind}")]
    UnsupportedDim { kind: String, dim: usize },

    #[error("{op} is not available for {model}")]
    UnsupportedModel { op: &'static str, model: String },

    #[error("no convergence in {what} (residual {residual:e})")]
    NoConvergence { what: &'static str, residual: f64 },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("invalid search settings: {0}")]
    InvalidSettings(String),

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("angular bisector does not meet the opposite side")]
    NoIntersection,

    #[error("bisector scan found {found} of {wanted} samples")]
    EmptyBisectorRegion { found: usize, wanted: usize },

    #[error("level-set scan found {found} of {wanted} samples")]
    EmptyLevelSet { found: usize, wanted: usize },
}
