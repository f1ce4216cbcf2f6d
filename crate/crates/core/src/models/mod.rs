//! The five model geometries and their validated handles.

pub(crate) mod disk;
pub mod hilbert;
pub mod norm;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use hilbert::{ChordHits, HilbertDomain};
pub use norm::{MinkowskiNorm, PolygonNorm};

use crate::error::{GeoError, Result};
use crate::linalg::{self, V3};
use crate::point::{ChartKind, PointChart, DISK_MARGIN, HILBERT_MARGIN};

/// Margin used when scan lines are clipped to a bounded chart.
pub(crate) const SCAN_MARGIN: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Euclidean,
    Sphere,
    #[serde(alias = "poincare-disk")]
    HyperbolicDisk,
    MinkowskiPlane,
    Hilbert,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// Exponent in `[1, inf]`.
    P(f64),
    /// Counterclockwise vertices of a symmetric convex unit ball.
    Polygon(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    /// Counterclockwise vertices of a strictly convex polygon.
    Polygon(Vec<[f64; 2]>),
    Ellipse { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Euclidean { dim: usize },
    /// Unit sphere in ambient R^3.
    Sphere,
    PoincareDisk,
    Minkowski(MinkowskiNorm),
    Hilbert(HilbertDomain),
}

/// A validated model geometry. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceHandle {
    model: Model,
}

/// Builds and validates a model geometry.
pub fn make_space(
    kind: SpaceKind,
    dim: usize,
    norm: Option<NormSpec>,
    domain: Option<DomainSpec>,
) -> Result<SpaceHandle> {
    let unsupported = || GeoError::UnsupportedDim {
        kind: format!("{kind:?}"),
        dim,
    };
    let model = match kind {
        SpaceKind::Euclidean => {
            if dim != 2 && dim != 3 {
                return Err(unsupported());
            }
            Model::Euclidean { dim }
        }
        SpaceKind::Sphere => {
            if dim != 2 {
                return Err(unsupported());
            }
            Model::Sphere
        }
        SpaceKind::HyperbolicDisk => {
            if dim != 2 {
                return Err(unsupported());
            }
            Model::PoincareDisk
        }
        SpaceKind::MinkowskiPlane => {
            if dim != 2 {
                return Err(unsupported());
            }
            let norm = match norm {
                Some(NormSpec::P(p)) => MinkowskiNorm::lp(p)?,
                Some(NormSpec::Polygon(v)) => MinkowskiNorm::polygon(v)?,
                None => {
                    return Err(GeoError::InvalidNorm(
                        "minkowski-plane requires a norm specification".into(),
                    ))
                }
            };
            Model::Minkowski(norm)
        }
        SpaceKind::Hilbert => {
            if dim != 2 {
                return Err(unsupported());
            }
            let domain = match domain {
                Some(DomainSpec::Polygon(v)) => HilbertDomain::polygon(v)?,
                Some(DomainSpec::Ellipse { a, b }) => HilbertDomain::ellipse(a, b)?,
                None => {
                    return Err(GeoError::InvalidDomain(
                        "hilbert requires a domain specification".into(),
                    ))
                }
            };
            Model::Hilbert(domain)
        }
    };
    Ok(SpaceHandle { model })
}

impl SpaceHandle {
    pub fn euclidean(dim: usize) -> Result<Self> {
        make_space(SpaceKind::Euclidean, dim, None, None)
    }

    pub fn sphere() -> Self {
        SpaceHandle {
            model: Model::Sphere,
        }
    }

    pub fn poincare_disk() -> Self {
        SpaceHandle {
            model: Model::PoincareDisk,
        }
    }

    pub fn minkowski_p(p: f64) -> Result<Self> {
        make_space(SpaceKind::MinkowskiPlane, 2, Some(NormSpec::P(p)), None)
    }

    pub fn minkowski_polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        make_space(SpaceKind::MinkowskiPlane, 2, Some(NormSpec::Polygon(vertices)), None)
    }

    pub fn hilbert_polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        make_space(SpaceKind::Hilbert, 2, None, Some(DomainSpec::Polygon(vertices)))
    }

    pub fn hilbert_ellipse(a: f64, b: f64) -> Result<Self> {
        make_space(SpaceKind::Hilbert, 2, None, Some(DomainSpec::Ellipse { a, b }))
    }

    /// Hilbert metric on the open unit disk (the Klein model).
    pub fn hilbert_unit_disk() -> Self {
        SpaceHandle {
            model: Model::Hilbert(HilbertDomain::Ellipse { a: 1.0, b: 1.0 }),
        }
    }

    /// Hilbert metric on the open square `(-1, 1)^2`.
    pub fn hilbert_unit_square() -> Self {
        Self::hilbert_polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
            .expect("unit square is convex")
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn kind(&self) -> SpaceKind {
        match self.model {
            Model::Euclidean { .. } => SpaceKind::Euclidean,
            Model::Sphere => SpaceKind::Sphere,
            Model::PoincareDisk => SpaceKind::HyperbolicDisk,
            Model::Minkowski(_) => SpaceKind::MinkowskiPlane,
            Model::Hilbert(_) => SpaceKind::Hilbert,
        }
    }

    pub fn chart(&self) -> ChartKind {
        match self.model {
            Model::Euclidean { .. } => ChartKind::EuclideanN,
            Model::Sphere => ChartKind::SphereAmbient,
            Model::PoincareDisk => ChartKind::PoincareDisk,
            Model::Minkowski(_) => ChartKind::MinkowskiPlane,
            Model::Hilbert(_) => ChartKind::HilbertDomain,
        }
    }

    /// Number of chart coordinates.
    pub fn chart_dim(&self) -> usize {
        match self.model {
            Model::Euclidean { dim } => dim,
            Model::Sphere => 3,
            _ => 2,
        }
    }

    /// Dimension of the space itself.
    pub fn dim(&self) -> usize {
        match self.model {
            Model::Euclidean { dim } => dim,
            _ => 2,
        }
    }

    /// Straight chart segments are geodesics (normed planes, Hilbert domains).
    pub fn chart_lines_are_geodesics(&self) -> bool {
        matches!(
            self.model,
            Model::Euclidean { .. } | Model::Minkowski(_) | Model::Hilbert(_)
        )
    }

    /// Geodesics through two points are unique (the space is a G-space).
    pub fn has_unique_geodesics(&self) -> bool {
        match &self.model {
            Model::Minkowski(n) => n.is_strictly_convex(),
            Model::Hilbert(d) => d.is_strictly_convex(),
            _ => true,
        }
    }

    /// Chart is bounded (disk or Hilbert domain).
    pub fn is_bounded_chart(&self) -> bool {
        matches!(self.model, Model::PoincareDisk | Model::Hilbert(_))
    }

    pub fn hilbert_domain(&self) -> Option<&HilbertDomain> {
        match &self.model {
            Model::Hilbert(d) => Some(d),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.model {
            Model::Euclidean { dim } => format!("euclidean-{dim}"),
            Model::Sphere => "sphere".into(),
            Model::PoincareDisk => "poincare-disk".into(),
            Model::Minkowski(n) => format!("minkowski-plane[{}]", n.describe()),
            Model::Hilbert(d) => format!("hilbert[{}]", d.describe()),
        }
    }

    /// Chart and domain check for a point used with this space.
    pub fn check(&self, p: &PointChart) -> Result<()> {
        if p.chart() != self.chart() {
            return Err(GeoError::ChartMismatch {
                expected: self.chart(),
                found: p.chart(),
            });
        }
        if p.dim() != self.chart_dim() {
            return Err(GeoError::UnsupportedDim {
                kind: self.name(),
                dim: p.dim(),
            });
        }
        if let Model::Hilbert(d) = &self.model {
            let depth = d.depth(p.v());
            if depth < HILBERT_MARGIN {
                return Err(GeoError::DomainViolation(format!(
                    "point {:?} is {depth:e} from the domain boundary",
                    p.coords()
                )));
            }
        }
        Ok(())
    }

    /// Builds a point of this space from chart coordinates.
    pub fn point(&self, coords: &[f64]) -> Result<PointChart> {
        let p = PointChart::new(self.chart(), coords)?;
        self.check(&p)?;
        Ok(p)
    }

    /// Builds a point from a raw vector, normalizing on the sphere.
    pub(crate) fn point_v(&self, v: V3) -> Result<PointChart> {
        match self.model {
            Model::Sphere => {
                let p = PointChart::sphere_normalized(v)?;
                Ok(p)
            }
            _ => self.point(&v[..self.chart_dim()]),
        }
    }

    /// Nearest admissible chart vector: normalizes on the sphere and pulls
    /// points of bounded charts back inside with a small margin.
    pub(crate) fn project_into_domain(&self, v: V3) -> V3 {
        match &self.model {
            Model::Sphere => linalg::normalize(v).unwrap_or([1.0, 0.0, 0.0]),
            Model::PoincareDisk => {
                let limit = 1.0 - 2.0 * DISK_MARGIN;
                let r = linalg::norm(v);
                if r >= limit {
                    linalg::scale(v, limit / r)
                } else {
                    v
                }
            }
            Model::Hilbert(d) => {
                if d.depth(v) >= 2.0 * HILBERT_MARGIN {
                    return v;
                }
                let c = d.center();
                let Some(u) = linalg::normalize(linalg::sub(v, c)) else {
                    return c;
                };
                let (_, fwd) = d.line_params(c, u);
                let mut s = (fwd - 4.0 * HILBERT_MARGIN).max(0.0);
                let mut p = linalg::axpy(c, s, u);
                while d.depth(p) < 2.0 * HILBERT_MARGIN && s > 0.0 {
                    s -= 4.0 * HILBERT_MARGIN;
                    p = linalg::axpy(c, s.max(0.0), u);
                }
                p
            }
            _ => v,
        }
    }

    /// Parameter interval `[lo, hi]` of the chart line `o + s * dir` that
    /// stays inside the chart domain with [`SCAN_MARGIN`]. `None` when the
    /// line misses the domain. Unbounded charts return infinite ends.
    pub(crate) fn clip_line(&self, o: V3, dir: V3) -> Option<(f64, f64)> {
        let len = linalg::norm(dir);
        if len == 0.0 {
            return None;
        }
        match &self.model {
            Model::PoincareDisk => {
                let r = 1.0 - SCAN_MARGIN;
                let a = linalg::dot(dir, dir);
                let b = 2.0 * linalg::dot(o, dir);
                let c = linalg::dot(o, o) - r * r;
                let disc = b * b - 4.0 * a * c;
                if disc <= 0.0 {
                    return None;
                }
                let sq = disc.sqrt();
                Some(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
            }
            Model::Hilbert(d) => {
                let u = linalg::scale(dir, 1.0 / len);
                let (lo, hi) = d.clip(o, u, SCAN_MARGIN)?;
                Some((lo / len, hi / len))
            }
            _ => Some((f64::NEG_INFINITY, f64::INFINITY)),
        }
    }

    /// Boundary hits of the chord through two interior points of a Hilbert domain.
    pub fn chord_boundary_hits(&self, x: &PointChart, y: &PointChart) -> Result<ChordHits> {
        let Model::Hilbert(d) = &self.model else {
            return Err(GeoError::UnsupportedModel {
                op: "chord_boundary_hits",
                model: self.name(),
            });
        };
        self.check(x)?;
        self.check(y)?;
        d.hits(x.v(), y.v())
    }
}

impl fmt::Display for SpaceHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
