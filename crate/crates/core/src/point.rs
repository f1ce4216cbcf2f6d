//! Chart coordinates for points of the model spaces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::linalg::{self, V3};

/// Unit vectors on the sphere must have norm 1 within this bound.
pub const SPHERE_NORM_TOL: f64 = 1e-12;
/// Disk points stay this far inside the unit circle.
pub const DISK_MARGIN: f64 = 1e-9;
/// Hilbert-domain points stay this far inside the boundary.
pub const HILBERT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartKind {
    EuclideanN,
    SphereAmbient,
    PoincareDisk,
    MinkowskiPlane,
    HilbertDomain,
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChartKind::EuclideanN => "euclidean-n",
            ChartKind::SphereAmbient => "sphere-ambient",
            ChartKind::PoincareDisk => "poincare-disk",
            ChartKind::MinkowskiPlane => "minkowski-plane",
            ChartKind::HilbertDomain => "hilbert-domain",
        };
        f.write_str(s)
    }
}

/// A point given by its coordinates in one of the fixed model charts.
///
/// Construction checks the chart-level invariants (finite coordinates, unit
/// norm on the sphere, strict interior of the disk). Membership in a Hilbert
/// domain depends on the domain and is checked by the owning space.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct PointChart {
    chart: ChartKind,
    coords: V3,
    dim: u8,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    chart: ChartKind,
    coords: Vec<f64>,
}

impl TryFrom<RawPoint> for PointChart {
    type Error = GeoError;

    fn try_from(raw: RawPoint) -> Result<Self> {
        PointChart::new(raw.chart, &raw.coords)
    }
}

impl From<PointChart> for RawPoint {
    fn from(p: PointChart) -> Self {
        RawPoint {
            chart: p.chart,
            coords: p.coords().to_vec(),
        }
    }
}

impl fmt::Debug for PointChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.chart, self.coords())
    }
}

impl PointChart {
    pub fn new(chart: ChartKind, coords: &[f64]) -> Result<Self> {
        let dim = coords.len();
        let ok_dim = match chart {
            ChartKind::EuclideanN => dim == 2 || dim == 3,
            ChartKind::SphereAmbient => dim == 3,
            _ => dim == 2,
        };
        if !ok_dim {
            return Err(GeoError::UnsupportedDim {
                kind: chart.to_string(),
                dim,
            });
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(GeoError::DomainViolation(format!(
                "non-finite coordinate {bad} in {chart} point"
            )));
        }
        let mut v = [0.0; 3];
        v[..dim].copy_from_slice(coords);
        match chart {
            ChartKind::SphereAmbient => {
                let n = linalg::norm(v);
                if (n - 1.0).abs() > SPHERE_NORM_TOL {
                    return Err(GeoError::DomainViolation(format!(
                        "sphere point has norm {n}, expected 1"
                    )));
                }
            }
            ChartKind::PoincareDisk => {
                let n = linalg::norm(v);
                if n >= 1.0 - DISK_MARGIN {
                    return Err(GeoError::DomainViolation(format!(
                        "disk point has norm {n}, must stay below 1 - {DISK_MARGIN:e}"
                    )));
                }
            }
            _ => {}
        }
        Ok(PointChart {
            chart,
            coords: v,
            dim: dim as u8,
        })
    }

    pub fn euclidean(coords: &[f64]) -> Result<Self> {
        Self::new(ChartKind::EuclideanN, coords)
    }

    /// Builds a sphere point from an ambient vector, normalizing it first.
    pub fn sphere_normalized(v: [f64; 3]) -> Result<Self> {
        let u = linalg::normalize(v)
            .ok_or_else(|| GeoError::DomainViolation("zero vector has no direction".into()))?;
        Self::new(ChartKind::SphereAmbient, &u)
    }

    pub fn sphere(v: [f64; 3]) -> Result<Self> {
        Self::new(ChartKind::SphereAmbient, &v)
    }

    pub fn disk(x: f64, y: f64) -> Result<Self> {
        Self::new(ChartKind::PoincareDisk, &[x, y])
    }

    pub fn minkowski(x: f64, y: f64) -> Result<Self> {
        Self::new(ChartKind::MinkowskiPlane, &[x, y])
    }

    pub fn hilbert(x: f64, y: f64) -> Result<Self> {
        Self::new(ChartKind::HilbertDomain, &[x, y])
    }

    pub fn chart(&self) -> ChartKind {
        self.chart
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    pub(crate) fn v(&self) -> V3 {
        self.coords
    }

    /// Euclidean distance between the chart coordinates.
    pub fn chart_distance(&self, other: &PointChart) -> f64 {
        linalg::dist(self.coords, other.coords)
    }

}
