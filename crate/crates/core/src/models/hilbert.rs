//! Bounded convex domains carrying a Hilbert metric, and the boundary-hit
//! machinery behind the cross-ratio distance.

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::linalg::{self, V3};
use crate::models::norm::strictly_convex_ccw;

#[derive(Debug, Clone, PartialEq)]
pub enum HilbertDomain {
    Polygon(ConvexPolygon),
    /// Axis-aligned ellipse centered at the origin.
    Ellipse { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<[f64; 2]>,
    /// Unit outward normals, one per edge `i -> i+1`.
    normals: Vec<V3>,
    offsets: Vec<f64>,
}

/// Boundary intersections of the line through two interior points, ordered
/// `entry - x - y - exit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordHits {
    pub entry: [f64; 2],
    pub exit: [f64; 2],
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(GeoError::InvalidDomain(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(GeoError::InvalidDomain("non-finite vertex".into()));
        }
        if !strictly_convex_ccw(&vertices) {
            return Err(GeoError::InvalidDomain(
                "polygon is not strictly convex in counterclockwise order".into(),
            ));
        }
        let n = vertices.len();
        let mut normals = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let nrm = linalg::normalize([b[1] - a[1], a[0] - b[0], 0.0])
                .ok_or_else(|| GeoError::InvalidDomain("repeated vertex".into()))?;
            offsets.push(nrm[0] * a[0] + nrm[1] * a[1]);
            normals.push(nrm);
        }
        Ok(ConvexPolygon {
            vertices,
            normals,
            offsets,
        })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    fn centroid(&self) -> V3 {
        let n = self.vertices.len() as f64;
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((0.0, 0.0), |(sx, sy), v| (sx + v[0], sy + v[1]));
        [sx / n, sy / n, 0.0]
    }
}

impl HilbertDomain {
    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        ConvexPolygon::new(vertices).map(HilbertDomain::Polygon)
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(GeoError::InvalidDomain(format!(
                "ellipse semi-axes must be positive, got ({a}, {b})"
            )));
        }
        Ok(HilbertDomain::Ellipse { a, b })
    }

    /// Boundary is free of segments, so chords are the only geodesics.
    pub fn is_strictly_convex(&self) -> bool {
        matches!(self, HilbertDomain::Ellipse { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            HilbertDomain::Polygon(p) => format!("polygon({} vertices)", p.vertices.len()),
            HilbertDomain::Ellipse { a, b } => format!("ellipse({a}, {b})"),
        }
    }

    pub(crate) fn center(&self) -> V3 {
        match self {
            HilbertDomain::Polygon(p) => p.centroid(),
            HilbertDomain::Ellipse { .. } => [0.0; 3],
        }
    }

    /// Approximate distance from `v` to the boundary; negative outside.
    /// Exact for polygons.
    pub(crate) fn depth(&self, v: V3) -> f64 {
        match self {
            HilbertDomain::Polygon(p) => p
                .normals
                .iter()
                .zip(&p.offsets)
                .map(|(n, h)| h - linalg::dot(*n, v))
                .fold(f64::INFINITY, f64::min),
            HilbertDomain::Ellipse { a, b } => {
                let r = (v[0] / a).hypot(v[1] / b);
                (1.0 - r) * a.min(*b)
            }
        }
    }

    /// Distances from an interior point `o` to the boundary along `-u` and
    /// `+u` (`u` a Euclidean unit vector).
    pub(crate) fn line_params(&self, o: V3, u: V3) -> (f64, f64) {
        match self {
            HilbertDomain::Polygon(p) => {
                let mut back = f64::INFINITY;
                let mut fwd = f64::INFINITY;
                for (n, h) in p.normals.iter().zip(&p.offsets) {
                    let nu = linalg::dot(*n, u);
                    let slack = h - linalg::dot(*n, o);
                    if nu > 0.0 {
                        fwd = fwd.min(slack / nu);
                    } else if nu < 0.0 {
                        back = back.min(slack / -nu);
                    }
                }
                (back, fwd)
            }
            HilbertDomain::Ellipse { a, b } => ellipse_params(*a, *b, o, u),
        }
    }

    /// Parameter interval of `o + s u` (unit `u`) at depth at least `margin`.
    pub(crate) fn clip(&self, o: V3, u: V3, margin: f64) -> Option<(f64, f64)> {
        match self {
            HilbertDomain::Polygon(p) => {
                let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
                for (n, h) in p.normals.iter().zip(&p.offsets) {
                    let nu = linalg::dot(*n, u);
                    let slack = h - margin - linalg::dot(*n, o);
                    if nu > 0.0 {
                        hi = hi.min(slack / nu);
                    } else if nu < 0.0 {
                        lo = lo.max(slack / nu);
                    } else if slack < 0.0 {
                        return None;
                    }
                }
                (lo < hi).then_some((lo, hi))
            }
            HilbertDomain::Ellipse { a, b } => {
                let (a, b) = (a - margin, b - margin);
                let (p, q) = (o[0] / a, o[1] / b);
                let (du, dv) = (u[0] / a, u[1] / b);
                let qa = du * du + dv * dv;
                let qb = 2.0 * (p * du + q * dv);
                let qc = p * p + q * q - 1.0;
                let disc = qb * qb - 4.0 * qa * qc;
                if disc <= 0.0 {
                    return None;
                }
                let sq = disc.sqrt();
                Some(((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)))
            }
        }
    }

    /// Exact Hilbert distance `1/2 ln` of the cross ratio, without validation.
    pub(crate) fn distance_raw(&self, x: V3, y: V3) -> f64 {
        let l = linalg::dist(x, y);
        if l == 0.0 {
            return 0.0;
        }
        let u = linalg::scale(linalg::sub(y, x), 1.0 / l);
        let (to_entry, _) = self.line_params(x, u);
        let (_, to_exit) = self.line_params(y, u);
        0.5 * ((l / to_entry).ln_1p() + (l / to_exit).ln_1p())
    }

    /// Point at Hilbert distance `s` from `x` along the chord direction `u`.
    pub(crate) fn point_along_raw(&self, x: V3, u: V3, s: f64) -> V3 {
        let (m, big_s) = self.line_params(x, u);
        // solve ((sigma + m) S) / (m (S - sigma)) = e^{2s} for sigma
        let q = (-2.0 * s).exp();
        let sigma = m * big_s * (-(-2.0 * s).exp_m1()) / (big_s * q + m);
        linalg::axpy(x, sigma, u)
    }

    /// `d(x, base + sigma(t) u) - t` for the unit-speed chord ray from
    /// `base` along unit `u`. The ray point sits at Euclidean gap
    /// `eps = e^{-2t} beta (alpha + beta) / (alpha + beta e^{-2t})` below the
    /// boundary; slacks there are formed from `eps` directly so the term
    /// keeps its digits after the point itself rounds onto the boundary.
    pub(crate) fn busemann_term(&self, base: V3, u: V3, x: V3, t: f64) -> f64 {
        let (alpha, beta) = self.line_params(base, u);
        let q = (-2.0 * t).exp();
        let scaled = beta * (alpha + beta) / (alpha + beta * q);
        let eps = scaled * q;
        let xi = linalg::axpy(base, beta, u);
        let r = linalg::axpy(xi, -eps, u);
        let l = linalg::dist(x, r);
        if l == 0.0 {
            return -t;
        }
        let w = linalg::scale(linalg::sub(r, x), 1.0 / l);
        let (to_entry, _) = self.line_params(x, w);
        // exit distance from r along w, divided by eps
        let kappa = match self {
            HilbertDomain::Polygon(p) => {
                let mut k = f64::INFINITY;
                for (n, h) in p.normals.iter().zip(&p.offsets) {
                    let (nu, nw) = (linalg::dot(*n, u), linalg::dot(*n, w));
                    if nw <= 0.0 {
                        continue;
                    }
                    let c = h - linalg::dot(*n, base) - beta * nu;
                    let c = if c <= 1e-12 * beta.max(1.0) { 0.0 } else { c };
                    k = k.min((c / eps + nu) / nw);
                }
                k
            }
            HilbertDomain::Ellipse { a, b } => {
                let xs = [xi[0] / a, xi[1] / b];
                let us = [u[0] / a, u[1] / b];
                let ws = [w[0] / a, w[1] / b];
                let rs = [xs[0] - eps * us[0], xs[1] - eps * us[1]];
                // 1 - |r|^2 over eps, using |xi| = 1
                let g = 2.0 * (xs[0] * us[0] + xs[1] * us[1]) - eps * (us[0] * us[0] + us[1] * us[1]);
                let ww = ws[0] * ws[0] + ws[1] * ws[1];
                let rw = rs[0] * ws[0] + rs[1] * ws[1];
                let root = (rw * rw + ww * g * eps).sqrt();
                if rw >= 0.0 {
                    g / (rw + root)
                } else {
                    (root - rw) / (ww * eps)
                }
            }
        };
        let to_exit = kappa * eps;
        0.5 * ((l / to_entry).ln_1p() + (l + to_exit).ln() - kappa.ln() - scaled.ln())
    }

    pub(crate) fn hits(&self, x: V3, y: V3) -> Result<ChordHits> {
        let l = linalg::dist(x, y);
        if l < 1e-9 {
            return Err(GeoError::DegenerateInput(format!(
                "chord through points {l:e} apart is undefined"
            )));
        }
        let u = linalg::scale(linalg::sub(y, x), 1.0 / l);
        let (to_entry, _) = self.line_params(x, u);
        let (_, to_exit) = self.line_params(y, u);
        let entry = linalg::axpy(x, -to_entry, u);
        let exit = linalg::axpy(y, to_exit, u);
        Ok(ChordHits {
            entry: [entry[0], entry[1]],
            exit: [exit[0], exit[1]],
        })
    }
}

fn ellipse_params(a: f64, b: f64, o: V3, u: V3) -> (f64, f64) {
    let (p, q) = (o[0] / a, o[1] / b);
    let (du, dv) = (u[0] / a, u[1] / b);
    let qa = du * du + dv * dv;
    let qb = 2.0 * (p * du + q * dv);
    let qc = p * p + q * q - 1.0;
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    let t = -0.5 * (qb + qb.signum() * disc);
    let (r1, r2) = if t == 0.0 {
        let r = (-qc / qa).sqrt();
        (-r, r)
    } else {
        let (r1, r2) = (t / qa, qc / t);
        (r1.min(r2), r1.max(r2))
    };
    let polish = |r: f64| newton_polish(p, q, du, dv, r);
    (-polish(r1), polish(r2))
}

/// Newton steps on `(p + s du)^2 + (q + s dv)^2 - 1`, recovering the digits
/// the quadratic formula loses near tangency. Steps that would move the
/// root far from the analytic value are rejected.
fn newton_polish(p: f64, q: f64, du: f64, dv: f64, mut r: f64) -> f64 {
    for _ in 0..3 {
        let (x, y) = (p + r * du, q + r * dv);
        let g = (x - 1.0) * (x + 1.0) + y * y;
        let dg = 2.0 * (x * du + y * dv);
        if dg == 0.0 {
            break;
        }
        let step = g / dg;
        if !step.is_finite() || step.abs() > 1e-6 * r.abs().max(1.0) {
            break;
        }
        r -= step;
        if step == 0.0 {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn busemann_term_matches_direct_difference() {
        let base = [0.1, -0.2, 0.0];
        let u = linalg::normalize([0.6, 0.5, 0.0]).unwrap();
        let x = [-0.3, 0.4, 0.0];
        for dom in [unit_square(), HilbertDomain::ellipse(1.0, 0.7).unwrap()] {
            for t in [0.5, 2.0, 6.0] {
                let direct = dom.distance_raw(x, dom.point_along_raw(base, u, t)) - t;
                assert!((dom.busemann_term(base, u, x, t) - direct).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn klein_busemann_limit_matches_poincare() {
        // the unit disk Hilbert metric is the Klein model; b(z) = ln(|z - 1|^2 / (1 - |z|^2))
        // in Poincare coordinates for the ray from 0 toward 1
        let k = [0.3, -0.45, 0.0];
        let s = 1.0 + (1.0 - linalg::dot(k, k)).sqrt();
        let z = [k[0] / s, k[1] / s];
        let exact = (((z[0] - 1.0f64).powi(2) + z[1] * z[1]) / (1.0 - z[0] * z[0] - z[1] * z[1])).ln();
        let dom = HilbertDomain::ellipse(1.0, 1.0).unwrap();
        for t in [40.0, 1e3, 1e6] {
            assert!((dom.busemann_term([0.0; 3], [1.0, 0.0, 0.0], k, t) - exact).abs() < 1e-13);
        }
    }

    fn unit_square() -> HilbertDomain {
        HilbertDomain::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn disk_diameter_hits() {
        let d = HilbertDomain::ellipse(1.0, 1.0).unwrap();
        let h = d.hits([0.0; 3], [0.5, 0.0, 0.0]).unwrap();
        assert!((h.entry[0] + 1.0).abs() < 1e-12 && h.entry[1].abs() < 1e-12);
        assert!((h.exit[0] - 1.0).abs() < 1e-12 && h.exit[1].abs() < 1e-12);
        let v = d.hits([0.0; 3], [0.0, 0.3, 0.0]).unwrap();
        assert!((v.entry[1] + 1.0).abs() < 1e-12 && (v.exit[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_diagonal_hits() {
        let h = unit_square().hits([0.0; 3], [0.5, 0.5, 0.0]).unwrap();
        for (got, want) in h.entry.iter().chain(&h.exit).zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12, "{h:?}");
        }
    }

    #[test]
    fn hits_reject_coincident_points() {
        let d = unit_square();
        assert!(matches!(
            d.hits([0.1, 0.1, 0.0], [0.1, 0.1 + 1e-10, 0.0]),
            Err(GeoError::DegenerateInput(_))
        ));
    }

    #[test]
    fn hits_lie_on_boundary() {
        let d = HilbertDomain::ellipse(2.0, 0.5).unwrap();
        let h = d.hits([0.3, 0.1, 0.0], [-0.2, 0.15, 0.0]).unwrap();
        for p in [h.entry, h.exit] {
            let g = (p[0] / 2.0).powi(2) + (p[1] / 0.5).powi(2) - 1.0;
            assert!(g.abs() < 1e-10, "{g}");
        }
    }

    #[test]
    fn point_along_inverts_distance() {
        let d = HilbertDomain::ellipse(1.0, 1.0).unwrap();
        let x = [0.1, -0.2, 0.0];
        let u = linalg::normalize([0.6, 0.8, 0.0]).unwrap();
        for s in [0.01, 0.5, 2.0, 6.0] {
            let p = d.point_along_raw(x, u, s);
            assert!((d.distance_raw(x, p) - s).abs() < 1e-10);
        }
    }

    #[test]
    fn reflex_polygon_rejected() {
        let r = HilbertDomain::polygon(vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.3], [2.0, 2.0], [0.0, 2.0]]);
        assert!(matches!(r, Err(GeoError::InvalidDomain(_))));
        assert!(HilbertDomain::ellipse(0.0, 1.0).is_err());
    }
}
