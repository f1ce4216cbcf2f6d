//! Space-agnostic measurement: distances, geodesic evaluation, angles and
//! triangles over the model charts.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::linalg::{self, V3};
use crate::models::{disk, Model, SpaceHandle};
use crate::point::PointChart;

/// Sphere queries farther apart than `pi - SPHERE_CAP` are refused.
pub const SPHERE_CAP: f64 = 0.1;
/// Minimum separation between distinct input points.
pub const DEGENERACY_FLOOR: f64 = 1e-6;
/// Tolerance for closed-form quantities.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Tolerance for solver-produced quantities.
pub const SOLVER_TOL: f64 = 1e-6;

impl SpaceHandle {
    /// Metric on raw chart vectors, no validation.
    pub(crate) fn dist_raw(&self, a: V3, b: V3) -> f64 {
        match self.model() {
            Model::Euclidean { .. } => linalg::dist(a, b),
            Model::Sphere => linalg::angle_between(a, b),
            Model::PoincareDisk => disk::distance_raw(a, b),
            Model::Minkowski(n) => n.eval(linalg::sub(b, a)),
            Model::Hilbert(d) => d.distance_raw(a, b),
        }
    }

    /// Distance between two points of this space.
    pub fn distance(&self, x: &PointChart, y: &PointChart) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        let (a, b) = (x.v(), y.v());
        if a == b {
            return Ok(0.0);
        }
        // fixed argument order makes the value exactly symmetric
        Ok(if lex_le(a, b) {
            self.dist_raw(a, b)
        } else {
            self.dist_raw(b, a)
        })
    }

    /// Unit chart direction in which the geodesic from `a` toward `b` leaves `a`.
    pub(crate) fn tangent_raw(&self, a: V3, b: V3) -> Option<V3> {
        match self.model() {
            Model::Sphere => {
                let t = linalg::sub(b, linalg::scale(a, linalg::dot(a, b)));
                linalg::normalize(t)
            }
            Model::PoincareDisk => disk::tangent(a, b),
            _ => linalg::normalize(linalg::sub(b, a)),
        }
    }

    /// Point at signed distance `s` along the geodesic through `a` with unit
    /// chart direction `dir`.
    pub(crate) fn line_raw(&self, a: V3, dir: V3, s: f64) -> V3 {
        if s >= 0.0 {
            self.shoot_raw(a, dir, s)
        } else {
            self.shoot_raw(a, linalg::scale(dir, -1.0), -s)
        }
    }

    /// Point at distance `s >= 0` from `a` along the geodesic leaving in the
    /// unit chart direction `dir`.
    pub(crate) fn shoot_raw(&self, a: V3, dir: V3, s: f64) -> V3 {
        match self.model() {
            Model::Euclidean { .. } => linalg::axpy(a, s, dir),
            Model::Minkowski(n) => linalg::axpy(a, s / n.eval(dir), dir),
            Model::Sphere => {
                let (sn, cs) = s.sin_cos();
                let p = linalg::add(linalg::scale(a, cs), linalg::scale(dir, sn));
                linalg::normalize(p).unwrap_or(p)
            }
            Model::PoincareDisk => disk::point_along_raw(a, dir, s),
            Model::Hilbert(d) => d.point_along_raw(a, dir, s),
        }
    }

    /// Length of the chart tangent vector `dir` at `a` in the model's
    /// (Finsler) metric.
    pub(crate) fn tangent_norm(&self, a: V3, dir: V3) -> f64 {
        match self.model() {
            Model::Euclidean { .. } | Model::Sphere => linalg::norm(dir),
            Model::Minkowski(n) => n.eval(dir),
            Model::PoincareDisk => 2.0 * linalg::norm(dir) / disk::conformal_gap(a),
            Model::Hilbert(d) => {
                let len = linalg::norm(dir);
                if len == 0.0 {
                    return 0.0;
                }
                let u = linalg::scale(dir, 1.0 / len);
                let (back, fwd) = d.line_params(a, u);
                0.5 * len * (1.0 / back + 1.0 / fwd)
            }
        }
    }

    fn require_distinct(&self, x: &PointChart, y: &PointChart, what: &str) -> Result<()> {
        if x.chart_distance(y) <= 1e-12 {
            return Err(GeoError::DegenerateInput(format!(
                "{what}: coincident points {:?}",
                x.coords()
            )));
        }
        Ok(())
    }

    fn sphere_cap(&self, d: f64) -> Result<()> {
        if matches!(self.model(), Model::Sphere) && d > PI - SPHERE_CAP {
            return Err(GeoError::AmbiguousGeodesic(format!(
                "sphere points {d:.6} apart exceed the uniqueness cap pi - {SPHERE_CAP}"
            )));
        }
        Ok(())
    }

    /// Point at fraction `t` of the way from `x` to `y` along the geodesic.
    pub fn geodesic_point(&self, x: &PointChart, y: &PointChart, t: f64) -> Result<PointChart> {
        if !(0.0..=1.0).contains(&t) {
            return Err(GeoError::DegenerateInput(format!(
                "geodesic parameter {t} outside [0, 1]"
            )));
        }
        let d = self.distance(x, y)?;
        self.require_distinct(x, y, "geodesic_point")?;
        self.sphere_cap(d)?;
        if t == 0.0 {
            return Ok(*x);
        }
        if t == 1.0 {
            return Ok(*y);
        }
        let p = match self.model() {
            Model::Euclidean { .. } | Model::Minkowski(_) => {
                linalg::axpy(x.v(), t, linalg::sub(y.v(), x.v()))
            }
            _ => self.along_raw(x.v(), y.v(), t * d)?,
        };
        self.point_v(p)
    }

    fn along_raw(&self, a: V3, b: V3, s: f64) -> Result<V3> {
        let dir = self.tangent_raw(a, b).ok_or_else(|| {
            GeoError::DegenerateInput("geodesic direction undefined for coincident points".into())
        })?;
        Ok(self.shoot_raw(a, dir, s))
    }

    /// Point at distance `s >= 0` from `x` along the geodesic through `y`,
    /// possibly beyond `y`.
    pub fn point_along(&self, x: &PointChart, y: &PointChart, s: f64) -> Result<PointChart> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(GeoError::DegenerateInput(format!("arclength {s} must be >= 0")));
        }
        let d = self.distance(x, y)?;
        self.require_distinct(x, y, "point_along")?;
        self.sphere_cap(d)?;
        let p = self.along_raw(x.v(), y.v(), s)?;
        self.point_v(p)
    }

    /// Unit chart direction of the geodesic from `x` toward `y`.
    pub fn initial_direction(&self, x: &PointChart, y: &PointChart) -> Result<Vec<f64>> {
        self.check(x)?;
        self.check(y)?;
        self.require_distinct(x, y, "initial_direction")?;
        let t = self
            .tangent_raw(x.v(), y.v())
            .ok_or_else(|| GeoError::DegenerateInput("direction undefined".into()))?;
        Ok(t[..self.chart_dim()].to_vec())
    }

    /// Angle at `vertex` between the geodesics toward `p` and `q`, from the
    /// initial chart tangents. The disk is conformal and the sphere uses its
    /// ambient tangent plane; normed planes and Hilbert domains use the chart
    /// angle between the straight initial directions.
    pub fn angle_at(&self, vertex: &PointChart, p: &PointChart, q: &PointChart) -> Result<f64> {
        for pt in [vertex, p, q] {
            self.check(pt)?;
        }
        self.require_distinct(vertex, p, "angle_at")?;
        self.require_distinct(vertex, q, "angle_at")?;
        let tp = self.tangent_raw(vertex.v(), p.v());
        let tq = self.tangent_raw(vertex.v(), q.v());
        match (tp, tq) {
            (Some(a), Some(b)) => Ok(linalg::angle_between(a, b)),
            _ => Err(GeoError::DegenerateInput(
                "angle undefined: tangent direction vanishes".into(),
            )),
        }
    }

    /// Sides and angles of the triangle `a b c`.
    pub fn triangle_measure(&self, a: &PointChart, b: &PointChart, c: &PointChart) -> Result<Triangle> {
        let alpha = self.distance(b, c)?;
        let beta = self.distance(a, c)?;
        let gamma = self.distance(a, b)?;
        for (d, name) in [(alpha, "bc"), (beta, "ac"), (gamma, "ab")] {
            if d < DEGENERACY_FLOOR {
                return Err(GeoError::DegenerateInput(format!(
                    "side {name} = {d:e} below the degeneracy floor"
                )));
            }
            self.sphere_cap(d)?;
        }
        if matches!(self.model(), Model::Euclidean { .. } | Model::Minkowski(_)) {
            let u = linalg::sub(b.v(), a.v());
            let w = linalg::sub(c.v(), a.v());
            let sine = linalg::norm(linalg::cross(u, w)) / (linalg::norm(u) * linalg::norm(w));
            if sine <= CLOSED_FORM_TOL {
                return Err(GeoError::DegenerateInput("collinear vertices".into()));
            }
        }
        let slack = (beta + gamma - alpha)
            .min(alpha + gamma - beta)
            .min(alpha + beta - gamma);
        if slack < CLOSED_FORM_TOL {
            return Err(GeoError::DegenerateInput(format!(
                "triangle inequality slack {slack:e} is not strict"
            )));
        }
        let angle_a = self.angle_at(a, b, c)?;
        let angle_b = self.angle_at(b, a, c)?;
        let angle_c = self.angle_at(c, a, b)?;
        for ang in [angle_a, angle_b, angle_c] {
            if !(ang > 0.0 && ang < PI) {
                return Err(GeoError::DegenerateInput(format!("angle {ang} outside (0, pi)")));
            }
        }
        Ok(Triangle {
            a: *a,
            b: *b,
            c: *c,
            alpha,
            beta,
            gamma,
            angle_a,
            angle_b,
            angle_c,
        })
    }
}

fn lex_le(a: V3, b: V3) -> bool {
    for i in 0..3 {
        match a[i].total_cmp(&b[i]) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    true
}

/// Triangle with sides opposite the like-named angles: `alpha = d(b, c)` is
/// opposite `angle_a` at `a`, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub a: PointChart,
    pub b: PointChart,
    pub c: PointChart,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub angle_a: f64,
    pub angle_b: f64,
    pub angle_c: f64,
}

impl Triangle {
    pub fn vertices(&self) -> [PointChart; 3] {
        [self.a, self.b, self.c]
    }

    pub fn sides(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.angle_a, self.angle_b, self.angle_c]
    }

    /// Stored sides agree with the distance oracle within 1e-9.
    pub fn is_consistent(&self, space: &SpaceHandle) -> Result<bool> {
        let fresh = [
            space.distance(&self.b, &self.c)?,
            space.distance(&self.a, &self.c)?,
            space.distance(&self.a, &self.b)?,
        ];
        Ok(fresh
            .iter()
            .zip(self.sides())
            .all(|(f, s)| (f - s).abs() <= CLOSED_FORM_TOL))
    }
}

/// Geodesic segment parametrized proportionally to arclength on `[0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicSegment<'s> {
    space: &'s SpaceHandle,
    start: PointChart,
    end: PointChart,
    length: f64,
}

impl<'s> GeodesicSegment<'s> {
    pub fn new(space: &'s SpaceHandle, start: PointChart, end: PointChart) -> Result<Self> {
        let length = space.distance(&start, &end)?;
        space.require_distinct(&start, &end, "segment")?;
        space.sphere_cap(length)?;
        Ok(GeodesicSegment {
            space,
            start,
            end,
            length,
        })
    }

    pub fn space(&self) -> &'s SpaceHandle {
        self.space
    }

    pub fn start(&self) -> PointChart {
        self.start
    }

    pub fn end(&self) -> PointChart {
        self.end
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn eval(&self, t: f64) -> Result<PointChart> {
        self.space.geodesic_point(&self.start, &self.end, t)
    }

    /// Chart vector at parameter `t`, no validation.
    pub(crate) fn eval_raw(&self, t: f64) -> V3 {
        let (a, b) = (self.start.v(), self.end.v());
        match self.space.model() {
            Model::Euclidean { .. } | Model::Minkowski(_) => linalg::axpy(a, t, linalg::sub(b, a)),
            _ => self.space.along_raw(a, b, t * self.length).unwrap_or(a),
        }
    }

    /// `n` evenly spaced interior points (excluding the endpoints).
    pub fn interior(&self, n: usize) -> Result<Vec<PointChart>> {
        (1..=n)
            .map(|k| self.eval(k as f64 / (n + 1) as f64))
            .collect()
    }
}

/// Unit-speed geodesic ray. Not available on the sphere, whose geodesics close up.
#[derive(Debug, Clone, Copy)]
pub struct RaySpec<'s> {
    space: &'s SpaceHandle,
    base: PointChart,
    direction: V3,
}

impl<'s> RaySpec<'s> {
    /// Ray from `base` leaving in chart direction `direction` (normalized here).
    pub fn new(space: &'s SpaceHandle, base: PointChart, direction: &[f64]) -> Result<Self> {
        if matches!(space.model(), Model::Sphere) {
            return Err(GeoError::UnsupportedModel {
                op: "geodesic ray",
                model: space.name(),
            });
        }
        space.check(&base)?;
        if direction.len() != space.chart_dim() {
            return Err(GeoError::UnsupportedDim {
                kind: "ray direction".into(),
                dim: direction.len(),
            });
        }
        let mut v = [0.0; 3];
        v[..direction.len()].copy_from_slice(direction);
        let direction = linalg::normalize(v)
            .ok_or_else(|| GeoError::DegenerateInput("zero ray direction".into()))?;
        Ok(RaySpec {
            space,
            base,
            direction,
        })
    }

    /// Ray from `base` through `through`.
    pub fn toward(space: &'s SpaceHandle, base: PointChart, through: &PointChart) -> Result<Self> {
        let dir = space.initial_direction(&base, through)?;
        Self::new(space, base, &dir)
    }

    pub fn space(&self) -> &'s SpaceHandle {
        self.space
    }

    pub fn base(&self) -> PointChart {
        self.base
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction[..self.space.chart_dim()]
    }

    pub(crate) fn eval_raw(&self, t: f64) -> V3 {
        self.space.shoot_raw(self.base.v(), self.direction, t)
    }

    pub fn eval(&self, t: f64) -> Result<PointChart> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(GeoError::DegenerateInput(format!("ray parameter {t} must be >= 0")));
        }
        if t == 0.0 {
            return Ok(self.base);
        }
        self.space.point_v(self.eval_raw(t))
    }

    /// Same geodesic, based at `eval(s0)`.
    pub fn shifted(&self, s0: f64) -> Result<RaySpec<'s>> {
        let base = self.eval(s0)?;
        let dir = match self.space.model() {
            Model::PoincareDisk => {
                let ahead = self.eval_raw(s0 + 1.0);
                disk::tangent(base.v(), ahead)
                    .ok_or_else(|| GeoError::DegenerateInput("ray collapsed".into()))?
            }
            _ => self.direction,
        };
        RaySpec::new(self.space, base, &dir[..self.space.chart_dim()])
    }

    /// `d(x, ray(t)) - t`, evaluated stably for large `t` where the model allows.
    pub(crate) fn busemann_term(&self, x: V3, t: f64) -> f64 {
        let b = self.base.v();
        match self.space.model() {
            Model::Euclidean { .. } => {
                // |w - t u| - t = (|w|^2 - 2 t <w,u>) / (|w - t u| + t)
                let w = linalg::sub(x, b);
                let far = linalg::norm(linalg::axpy(w, -t, self.direction));
                (linalg::dot(w, w) - 2.0 * t * linalg::dot(w, self.direction)) / (far + t)
            }
            Model::PoincareDisk => disk::busemann_term(b, self.direction, x, t),
            Model::Hilbert(d) => d.busemann_term(b, self.direction, x, t),
            _ => self.space.dist_raw(x, self.eval_raw(t)) - t,
        }
    }
}

/// Complete geodesic through `base` with unit chart direction; negative
/// parameters run backwards. Available where geodesics are unique and
/// unbounded: Euclidean, strictly convex normed planes, the disk and
/// ellipse Hilbert domains.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicLine<'s> {
    space: &'s SpaceHandle,
    base: PointChart,
    direction: V3,
}

impl<'s> GeodesicLine<'s> {
    pub fn new(space: &'s SpaceHandle, base: PointChart, direction: &[f64]) -> Result<Self> {
        if matches!(space.model(), Model::Sphere) || !space.has_unique_geodesics() {
            return Err(GeoError::UnsupportedModel {
                op: "complete geodesic line",
                model: space.name(),
            });
        }
        let ray = RaySpec::new(space, base, direction)?;
        Ok(GeodesicLine {
            space,
            base,
            direction: ray.direction,
        })
    }

    pub fn base(&self) -> PointChart {
        self.base
    }

    /// Chart vector at signed parameter `t`; may sit on the ideal boundary
    /// for bounded charts when `|t|` is large.
    pub(crate) fn eval_raw(&self, t: f64) -> V3 {
        self.space.line_raw(self.base.v(), self.direction, t)
    }

    pub fn eval(&self, t: f64) -> Result<PointChart> {
        if t == 0.0 {
            return Ok(self.base);
        }
        self.space.point_v(self.eval_raw(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> SpaceHandle {
        SpaceHandle::euclidean(2).unwrap()
    }

    /// Composite Simpson rule.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn distance_examples() {
        let e = e2();
        let d = e
            .distance(&e.point(&[0.0, 0.0]).unwrap(), &e.point(&[3.0, 4.0]).unwrap())
            .unwrap();
        assert_eq!(d, 5.0);

        let s = SpaceHandle::sphere();
        let d = s
            .distance(&s.point(&[1.0, 0.0, 0.0]).unwrap(), &s.point(&[0.0, 1.0, 0.0]).unwrap())
            .unwrap();
        assert!((d - PI / 2.0).abs() < 1e-15);

        // oracle: integrate the disk length element 2 / (1 - r^2) along the diameter
        let oracle = simpson(|r| 2.0 / (1.0 - r * r), 0.0, 0.5, 2000);
        let k = SpaceHandle::poincare_disk();
        let d = k
            .distance(&k.point(&[0.0, 0.0]).unwrap(), &k.point(&[0.5, 0.0]).unwrap())
            .unwrap();
        assert!((oracle - 1.098612288668).abs() < 1e-11);
        assert!((d - oracle).abs() < 1e-11);

        // oracle: cross ratio with boundary hits at -1 and +1
        let (a, x, y, b) = (-1.0f64, 0.0f64, 0.5f64, 1.0f64);
        let cross = ((y - a) * (b - x)) / ((x - a) * (b - y));
        let oracle = 0.5 * cross.ln();
        let h = SpaceHandle::hilbert_unit_disk();
        let d = h
            .distance(&h.point(&[0.0, 0.0]).unwrap(), &h.point(&[0.5, 0.0]).unwrap())
            .unwrap();
        assert!((oracle - 0.549306144334).abs() < 1e-11);
        assert!((d - oracle).abs() < 1e-14);
    }

    #[test]
    fn distance_errors() {
        let e = e2();
        let k = SpaceHandle::poincare_disk();
        let p = e.point(&[0.0, 0.0]).unwrap();
        let q = k.point(&[0.1, 0.0]).unwrap();
        assert!(matches!(e.distance(&p, &q), Err(GeoError::ChartMismatch { .. })));
        let h = SpaceHandle::hilbert_ellipse(0.5, 0.5).unwrap();
        let outside = PointChart::hilbert(0.7, 0.0).unwrap();
        let inside = PointChart::hilbert(0.0, 0.0).unwrap();
        assert!(matches!(h.distance(&inside, &outside), Err(GeoError::DomainViolation(_))));
    }

    #[test]
    fn geodesic_point_examples() {
        let e = e2();
        let m = e
            .geodesic_point(&e.point(&[0.0, 0.0]).unwrap(), &e.point(&[2.0, 0.0]).unwrap(), 0.5)
            .unwrap();
        assert_eq!(m.coords(), &[1.0, 0.0]);

        let s = SpaceHandle::sphere();
        let m = s
            .geodesic_point(&s.point(&[1.0, 0.0, 0.0]).unwrap(), &s.point(&[0.0, 1.0, 0.0]).unwrap(), 0.5)
            .unwrap();
        let h = 0.5f64.sqrt();
        assert!((m.coords()[0] - h).abs() < 1e-15 && (m.coords()[1] - h).abs() < 1e-15);

        let k = SpaceHandle::poincare_disk();
        let m = k
            .geodesic_point(&k.point(&[-0.5, 0.0]).unwrap(), &k.point(&[0.5, 0.0]).unwrap(), 0.5)
            .unwrap();
        assert!(m.coords()[0].abs() < 1e-15 && m.coords()[1].abs() < 1e-15);
    }

    #[test]
    fn geodesic_point_errors() {
        let s = SpaceHandle::sphere();
        let x = s.point(&[1.0, 0.0, 0.0]).unwrap();
        let y = PointChart::sphere_normalized([-1.0, 0.05, 0.0]).unwrap();
        assert!(matches!(s.geodesic_point(&x, &y, 0.5), Err(GeoError::AmbiguousGeodesic(_))));
        assert!(matches!(s.geodesic_point(&x, &x, 0.5), Err(GeoError::DegenerateInput(_))));
    }

    #[test]
    fn geodesic_point_hits_fraction_of_distance() {
        let spaces = [
            SpaceHandle::poincare_disk(),
            SpaceHandle::hilbert_unit_square(),
            SpaceHandle::minkowski_p(4.0).unwrap(),
        ];
        for sp in &spaces {
            let x = sp.point(&[-0.3, 0.2]).unwrap();
            let y = sp.point(&[0.6, -0.45]).unwrap();
            let d = sp.distance(&x, &y).unwrap();
            for t in [0.1, 0.37, 0.9] {
                let p = sp.geodesic_point(&x, &y, t).unwrap();
                assert!((sp.distance(&x, &p).unwrap() - t * d).abs() < 1e-9, "{sp}");
            }
        }
    }

    #[test]
    fn angle_examples() {
        let e = e2();
        let o = e.point(&[0.0, 0.0]).unwrap();
        let a = e
            .angle_at(&o, &e.point(&[1.0, 0.0]).unwrap(), &e.point(&[0.0, 1.0]).unwrap())
            .unwrap();
        assert!((a - PI / 2.0).abs() < 1e-15);

        let s = SpaceHandle::sphere();
        let a = s
            .angle_at(
                &s.point(&[1.0, 0.0, 0.0]).unwrap(),
                &s.point(&[0.0, 1.0, 0.0]).unwrap(),
                &s.point(&[0.0, 0.0, 1.0]).unwrap(),
            )
            .unwrap();
        assert!((a - PI / 2.0).abs() < 1e-15);

        let k = SpaceHandle::poincare_disk();
        let a = k
            .angle_at(
                &k.point(&[0.0, 0.0]).unwrap(),
                &k.point(&[0.5, 0.0]).unwrap(),
                &k.point(&[0.0, 0.5]).unwrap(),
            )
            .unwrap();
        assert!((a - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn disk_angle_matches_circle_arc_tangent() {
        // oracle: the geodesic through a and b is a circle orthogonal to the
        // unit circle; its tangent at a is perpendicular to the radius (a - center)
        let (a, b) = ([0.3f64, 0.1f64], [-0.2f64, 0.5f64]);
        let inv = |p: [f64; 2]| {
            let r2 = p[0] * p[0] + p[1] * p[1];
            [p[0] / r2, p[1] / r2]
        };
        let ai = inv(a);
        // center equidistant from a, b and a's inverse
        let solve = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
            let (a1, b1, c1) = (2.0 * (q[0] - p[0]), 2.0 * (q[1] - p[1]), q[0] * q[0] + q[1] * q[1] - p[0] * p[0] - p[1] * p[1]);
            let (a2, b2, c2) = (2.0 * (r[0] - p[0]), 2.0 * (r[1] - p[1]), r[0] * r[0] + r[1] * r[1] - p[0] * p[0] - p[1] * p[1]);
            let det = a1 * b2 - a2 * b1;
            [(c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det]
        };
        let c = solve(a, b, ai);
        let radial = [a[0] - c[0], a[1] - c[1]];
        let k = SpaceHandle::poincare_disk();
        let dir = k
            .initial_direction(&k.point(&a).unwrap(), &k.point(&b).unwrap())
            .unwrap();
        assert!((dir[0] * radial[0] + dir[1] * radial[1]).abs() < 1e-12);
    }

    #[test]
    fn triangle_examples() {
        let e = e2();
        let t = e
            .triangle_measure(
                &e.point(&[0.0, 0.0]).unwrap(),
                &e.point(&[4.0, 0.0]).unwrap(),
                &e.point(&[0.0, 3.0]).unwrap(),
            )
            .unwrap();
        assert_eq!(t.sides(), [5.0, 3.0, 4.0]);
        assert!((t.angle_a - PI / 2.0).abs() < 1e-15);

        let s = SpaceHandle::sphere();
        let t = s
            .triangle_measure(
                &s.point(&[1.0, 0.0, 0.0]).unwrap(),
                &s.point(&[0.0, 1.0, 0.0]).unwrap(),
                &s.point(&[0.0, 0.0, 1.0]).unwrap(),
            )
            .unwrap();
        for v in t.sides().into_iter().chain(t.angles()) {
            assert!((v - PI / 2.0).abs() < 1e-15);
        }

        let k = SpaceHandle::poincare_disk();
        let (a, b, c) = (
            k.point(&[0.0, 0.0]).unwrap(),
            k.point(&[0.6, 0.0]).unwrap(),
            k.point(&[0.0, 0.6]).unwrap(),
        );
        let t = k.triangle_measure(&a, &b, &c).unwrap();
        assert!((t.angle_a - PI / 2.0).abs() < 1e-15);
        // closed form: d(0, r) = 2 atanh r; cosh d(b, c) = 1 + 2|b - c|^2 / (1 - r^2)^2
        assert!((t.gamma - 2.0 * 0.6f64.atanh()).abs() < 1e-14);
        let cosh_alpha = 1.0 + 2.0 * 0.72 / (0.64f64 * 0.64);
        assert!((t.alpha - cosh_alpha.acosh()).abs() < 1e-12);
        assert!(t.is_consistent(&k).unwrap());
    }

    #[test]
    fn triangle_degeneracies() {
        let e = e2();
        let p = |x: f64, y: f64| e.point(&[x, y]).unwrap();
        assert!(matches!(
            e.triangle_measure(&p(0.0, 0.0), &p(1.0, 1.0), &p(2.0, 2.0)),
            Err(GeoError::DegenerateInput(_))
        ));
        assert!(matches!(
            e.triangle_measure(&p(0.0, 0.0), &p(1e-7, 0.0), &p(0.0, 1.0)),
            Err(GeoError::DegenerateInput(_))
        ));
        let k = SpaceHandle::poincare_disk();
        let q = |x: f64, y: f64| k.point(&[x, y]).unwrap();
        // collinear along a diameter
        assert!(matches!(
            k.triangle_measure(&q(-0.5, 0.0), &q(0.0, 0.0), &q(0.5, 0.0)),
            Err(GeoError::DegenerateInput(_))
        ));
    }

    #[test]
    fn segment_and_ray_invariants() {
        let k = SpaceHandle::poincare_disk();
        let seg = GeodesicSegment::new(&k, k.point(&[0.1, 0.2]).unwrap(), k.point(&[-0.7, 0.3]).unwrap())
            .unwrap();
        assert_eq!(seg.eval(0.0).unwrap(), seg.start());
        assert_eq!(seg.eval(1.0).unwrap(), seg.end());
        let p = seg.eval(0.25).unwrap();
        let q = seg.eval(0.75).unwrap();
        assert!((k.distance(&p, &q).unwrap() - 0.5 * seg.length()).abs() < 1e-9);

        let ray = RaySpec::new(&k, k.point(&[0.2, -0.1]).unwrap(), &[0.0, 1.0]).unwrap();
        for (s, t) in [(0.0, 3.0), (1.5, 12.0), (4.0, 18.0)] {
            let d = k.distance(&ray.eval(s).unwrap(), &ray.eval(t).unwrap()).unwrap();
            assert!((d - (t - s)).abs() < 1e-6, "{s} {t} {d}");
        }
        assert!(matches!(
            RaySpec::new(&SpaceHandle::sphere(), PointChart::sphere([0.0, 0.0, 1.0]).unwrap(), &[1.0, 0.0, 0.0]),
            Err(GeoError::UnsupportedModel { .. })
        ));
    }

    #[test]
    fn tangent_norm_of_disk_matches_distance_derivative() {
        let k = SpaceHandle::poincare_disk();
        let a = [0.3, -0.4, 0.0];
        let dir = [0.6, 0.8, 0.0];
        let h = 1e-6;
        let fd = disk::distance_raw(a, linalg::axpy(a, h, dir)) / h;
        assert!((k.tangent_norm(a, dir) - fd).abs() < 1e-5);
    }
}
