//! Norms for Minkowski planes: l^p norms and polygonal unit balls.

use rand::Rng;
use crate::error::{GeoError, Result};
use crate::linalg::{self, V3};
use crate::rng;

/// Symmetric-vertex matching tolerance for polygon unit balls.
const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum MinkowskiNorm {
    /// `p` in `[1, inf]`; `f64::INFINITY` is the max norm.
    Lp(f64),
    Polygon(PolygonNorm),
}

/// Norm whose unit ball is a centrally symmetric convex polygon.
///
/// The gauge is evaluated as the largest facet functional `<n_i, x> / h_i`,
/// i.e. the support function of the polar body evaluated over its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonNorm {
    vertices: Vec<[f64; 2]>,
    facets: Vec<[f64; 2]>,
}

impl MinkowskiNorm {
    pub fn lp(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(GeoError::InvalidNorm(format!(
                "l^p unit ball is not convex for p = {p}"
            )));
        }
        Ok(MinkowskiNorm::Lp(p))
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        PolygonNorm::new(vertices).map(MinkowskiNorm::Polygon)
    }

    pub(crate) fn eval(&self, v: V3) -> f64 {
        let (x, y) = (v[0].abs(), v[1].abs());
        match self {
            MinkowskiNorm::Lp(p) => lp_norm(x, y, *p),
            MinkowskiNorm::Polygon(poly) => poly.gauge(v),
        }
    }

    /// Unit ball has no segments on its boundary.
    pub fn is_strictly_convex(&self) -> bool {
        match self {
            MinkowskiNorm::Lp(p) => *p > 1.0 && p.is_finite(),
            MinkowskiNorm::Polygon(_) => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            MinkowskiNorm::Lp(p) if p.is_infinite() => "l^inf".to_string(),
            MinkowskiNorm::Lp(p) => format!("l^{p}"),
            MinkowskiNorm::Polygon(poly) => format!("polygon({} vertices)", poly.vertices.len()),
        }
    }
}

fn lp_norm(x: f64, y: f64, p: f64) -> f64 {
    if p == 1.0 {
        x + y
    } else if p == 2.0 {
        x.hypot(y)
    } else if p.is_infinite() {
        x.max(y)
    } else {
        let m = x.max(y);
        if m == 0.0 {
            return 0.0;
        }
        let (a, b) = (x / m, y / m);
        m * (a.powf(p) + b.powf(p)).powf(1.0 / p)
    }
}

impl PolygonNorm {
    /// Vertices in counterclockwise order; the set must be symmetric about
    /// the origin and strictly convex.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let n = vertices.len();
        if n < 4 || !n.is_multiple_of(2) {
            return Err(GeoError::InvalidNorm(format!(
                "a symmetric polygon needs an even vertex count >= 4, got {n}"
            )));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(GeoError::InvalidNorm("non-finite vertex".into()));
        }
        if !strictly_convex_ccw(&vertices) {
            return Err(GeoError::InvalidNorm(
                "unit ball polygon is not strictly convex and counterclockwise".into(),
            ));
        }
        for v in &vertices {
            let mirrored = vertices
                .iter()
                .any(|w| (w[0] + v[0]).abs() <= SYMMETRY_TOL && (w[1] + v[1]).abs() <= SYMMETRY_TOL);
            if !mirrored {
                return Err(GeoError::InvalidNorm(format!(
                    "unit ball is not symmetric: -{v:?} is not a vertex"
                )));
            }
        }
        let facets = facet_functionals(&vertices);
        Ok(PolygonNorm { vertices, facets })
    }

    /// A seeded symmetric polygon: `half` points on the unit circle at
    /// random angles in `[0, pi)`, mirrored, then sheared by a random linear map.
    pub fn seeded(seed: u64, half: usize) -> Result<Self> {
        let half = half.max(2);
        let mut r = rng::stream(seed, 0x706f_6c79, 0);
        loop {
            let mut angles: Vec<f64> = (0..half)
                .map(|_| r.random_range(0.0..std::f64::consts::PI))
                .collect();
            angles.sort_by(f64::total_cmp);
            let gaps_ok = angles.windows(2).all(|w| w[1] - w[0] > 0.15)
                && angles[0] + std::f64::consts::PI - angles[half - 1] > 0.15;
            if !gaps_ok {
                continue;
            }
            let (a, b, c, d) = (
                r.random_range(0.8..1.25),
                r.random_range(-0.3..0.3),
                r.random_range(-0.3..0.3),
                r.random_range(0.8..1.25),
            );
            let mut verts: Vec<[f64; 2]> = angles
                .iter()
                .map(|t| {
                    let (s, co) = t.sin_cos();
                    [a * co + b * s, c * co + d * s]
                })
                .collect();
            let mirrored: Vec<[f64; 2]> = verts.iter().map(|v| [-v[0], -v[1]]).collect();
            verts.extend(mirrored);
            if let Ok(poly) = PolygonNorm::new(verts.clone()) {
                return Ok(poly);
            }
            // a reflecting map reverses orientation
            verts.reverse();
            if let Ok(poly) = PolygonNorm::new(verts) {
                return Ok(poly);
            }
        }
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    /// Midpoint of the first edge, scaled to unit norm. Rays in this direction
    /// see a flat face of the ball, so their horocycles are straight.
    pub fn edge_midpoint_direction(&self) -> [f64; 2] {
        let (a, b) = (self.vertices[0], self.vertices[1]);
        let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let g = self.gauge([m[0], m[1], 0.0]);
        [m[0] / g, m[1] / g]
    }

    fn gauge(&self, v: V3) -> f64 {
        self.facets
            .iter()
            .map(|f| f[0] * v[0] + f[1] * v[1])
            .fold(0.0, f64::max)
    }
}

fn facet_functionals(vertices: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let normal = [b[1] - a[1], a[0] - b[0]];
            let h = normal[0] * a[0] + normal[1] * a[1];
            [normal[0] / h, normal[1] / h]
        })
        .collect()
}

pub(crate) fn strictly_convex_ccw(vertices: &[[f64; 2]]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    let to3 = |p: [f64; 2]| [p[0], p[1], 0.0];
    let mut turning = 0.0;
    for i in 0..n {
        let a = to3(vertices[i]);
        let b = to3(vertices[(i + 1) % n]);
        let c = to3(vertices[(i + 2) % n]);
        let e1 = linalg::sub(b, a);
        let e2 = linalg::sub(c, b);
        if linalg::cross2(e1, e2) <= 0.0 {
            return false;
        }
        turning += linalg::angle_between(e1, e2);
    }
    // a star polygon turns more than once
    (turning - std::f64::consts::TAU).abs() < 1e-6
}
