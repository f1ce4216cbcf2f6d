//! Busemann functions, horocycles as limits of circles, asymptotes and the
//! additivity check for chart-straight geodesics.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::geometry::{GeodesicLine, RaySpec};
use crate::linalg::{self, V3};
use crate::models::{disk, HilbertDomain, Model, SpaceHandle};
use crate::numeric;
use crate::point::PointChart;
use crate::rng;
use crate::solver::SearchSettings;

const STREAM_LEVEL: u64 = 0x6c65_7665;

pub const BUSEMANN_T_START: f64 = 8.0;
pub const BUSEMANN_T_MAX: f64 = 1_048_576.0;
/// Half-width of the chart window across the horocycle.
pub const HOROCYCLE_WINDOW: f64 = 0.3;
/// Parameter samples on `[0, 1]` when comparing geodesics.
pub const GEODESIC_SAMPLES: usize = 33;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusemannEvaluation {
    pub x: PointChart,
    pub value: f64,
    pub t_final: f64,
    pub cauchy_gap: f64,
    pub tol: f64,
    /// False when the gap never dropped to `tol`; the value is still the
    /// last iterate.
    pub converged: bool,
}

/// `d(x, ray(t)) - t`.
pub fn busemann_at(ray: &RaySpec, x: &PointChart, t: f64) -> Result<f64> {
    ray.space().check(x)?;
    Ok(ray.busemann_term(x.v(), t))
}

/// Busemann value `lim d(x, ray(T)) - T` by doubling `T` from 8 until the
/// Cauchy gap drops to `tol` or `T` passes `2^20`.
pub fn busemann_value(ray: &RaySpec, x: &PointChart, tol: f64) -> Result<BusemannEvaluation> {
    ray.space().check(x)?;
    if !(tol > 0.0) {
        return Err(GeoError::InvalidSettings(format!("tolerance {tol} must be > 0")));
    }
    let xv = x.v();
    let mut t = BUSEMANN_T_START;
    let mut prev = ray.busemann_term(xv, t);
    loop {
        let t2 = 2.0 * t;
        let value = ray.busemann_term(xv, t2);
        let gap = (value - prev).abs();
        if gap <= tol || t2 >= BUSEMANN_T_MAX {
            return Ok(BusemannEvaluation {
                x: *x,
                value,
                t_final: t2,
                cauchy_gap: gap,
                tol,
                converged: gap <= tol,
            });
        }
        t = t2;
        prev = value;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorocycleCloud {
    pub ray_base: PointChart,
    pub ray_direction: Vec<f64>,
    pub anchor: PointChart,
    pub anchor_value: f64,
    /// Ray parameter at which every value in the cloud is evaluated.
    pub t_fixed: f64,
    pub tol: f64,
    /// Chart offsets of the scan lines across the window.
    pub offsets: Vec<f64>,
    pub samples: Vec<PointChart>,
    pub values: Vec<f64>,
}

impl HorocycleCloud {
    pub fn points(&self) -> Vec<[f64; 2]> {
        self.samples.iter().map(|p| [p.coords()[0], p.coords()[1]]).collect()
    }
}

/// Chart direction at `x` pointing along the ray toward its far end.
fn toward_ray_end(ray: &RaySpec, x: V3) -> Option<V3> {
    let far = ray.eval_raw(64.0);
    ray.space().tangent_raw(x, far)
}

/// Seeded sample of the horocycle through `anchor`: roots of
/// `b_T(.) - b_T(anchor)` along chart lines across a window around the
/// anchor, all at one fixed `T`.
pub fn limit_sphere_sample(ray: &RaySpec, anchor: &PointChart, n: usize, tol: f64, seed: u64) -> Result<HorocycleCloud> {
    let space = ray.space();
    if space.chart_dim() != 2 {
        return Err(GeoError::UnsupportedDim {
            kind: "horocycle sampling".into(),
            dim: space.chart_dim(),
        });
    }
    let av = anchor.v();
    let u = toward_ray_end(ray, av)
        .ok_or_else(|| GeoError::DegenerateInput("anchor sits on the ray's far end".into()))?;
    let nrm = linalg::perp(u);
    let w = HOROCYCLE_WINDOW;

    let mut t_fixed = busemann_value(ray, anchor, tol)?.t_final;
    for side in [-w, w] {
        if let Ok(p) = space.point_v(linalg::axpy(av, side, nrm)) {
            t_fixed = t_fixed.max(busemann_value(ray, &p, tol)?.t_final);
        }
    }
    let level = ray.busemann_term(av, t_fixed);
    let b = |x: V3| ray.busemann_term(x, t_fixed) - level;

    let hits: Vec<Option<(f64, PointChart, f64)>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(seed, STREAM_LEVEL, k as u64);
            let jitter: f64 = r.random_range(0.0..1.0);
            let sigma = -w + 2.0 * w * (k as f64 + jitter) / n as f64;
            let o = linalg::axpy(av, sigma, nrm);
            let (lo, hi) = space.clip_line(o, u)?;
            let (lo, hi) = (lo.max(-1.0), hi.min(1.0));
            if !(lo < hi) {
                return None;
            }
            let g = |s: f64| b(linalg::axpy(o, s, u));
            let (a, c) = numeric::sign_brackets(g, lo, hi, 64)
                .into_iter()
                .min_by(|x, y| (x.0 + x.1).abs().total_cmp(&(y.0 + y.1).abs()))?;
            let s = numeric::bisect(g, a, c, 1e-15, 200)?;
            let p = space.point_v(linalg::axpy(o, s, u)).ok()?;
            let value = ray.busemann_term(p.v(), t_fixed);
            ((value - level).abs() <= tol).then_some((sigma, p, value))
        })
        .collect();
    let found: Vec<(f64, PointChart, f64)> = hits.into_iter().flatten().collect();
    if found.len() < n {
        return Err(GeoError::EmptyLevelSet {
            found: found.len(),
            wanted: n,
        });
    }
    Ok(HorocycleCloud {
        ray_base: ray.base(),
        ray_direction: ray.direction().to_vec(),
        anchor: *anchor,
        anchor_value: level,
        t_fixed,
        tol,
        offsets: found.iter().map(|f| f.0).collect(),
        samples: found.iter().map(|f| f.1).collect(),
        values: found.iter().map(|f| f.2).collect(),
    })
}

/// Span along the total-least-squares line and the signed normal offsets.
fn tls_offsets(points: &[[f64; 2]]) -> (f64, Vec<f64>) {
    let n = points.len() as f64;
    let (mx, my) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + p[0] / n, b + p[1] / n));
    let mut cov = Matrix2::zeros();
    for p in points {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        cov += Matrix2::new(dx * dx, dx * dy, dx * dy, dy * dy) / n;
    }
    let eig = SymmetricEigen::new(cov);
    let (imax, imin) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let (axis, normal) = (eig.eigenvectors.column(imax), eig.eigenvectors.column(imin));
    let along: Vec<f64> = points
        .iter()
        .map(|p| (p[0] - mx) * axis[0] + (p[1] - my) * axis[1])
        .collect();
    let span = along.iter().copied().fold(f64::NEG_INFINITY, f64::max) - along.iter().copied().fold(f64::INFINITY, f64::min);
    let offsets = points
        .iter()
        .map(|p| (p[0] - mx) * normal[0] + (p[1] - my) * normal[1])
        .collect();
    (span, offsets)
}

/// RMS distance to the total-least-squares line, divided by the span of the
/// samples along that line.
pub fn horocycle_line_fit_residual(cloud: &HorocycleCloud) -> Result<f64> {
    line_fit_residual(&cloud.points())
}

pub fn line_fit_residual(points: &[[f64; 2]]) -> Result<f64> {
    let dev = line_fit_deviations(points)?;
    Ok((dev.iter().map(|d| d * d).sum::<f64>() / dev.len() as f64).sqrt())
}

/// Signed distance of each point to the total-least-squares line, divided by
/// the span. The sign depends on the fitted normal.
pub fn line_fit_deviations(points: &[[f64; 2]]) -> Result<Vec<f64>> {
    if points.len() < 10 {
        return Err(GeoError::InsufficientSamples(format!(
            "{} samples, line fit needs at least 10",
            points.len()
        )));
    }
    let (span, offsets) = tls_offsets(points);
    if span < 0.5 {
        return Err(GeoError::InsufficientSamples(format!("sample span {span} below 0.5")));
    }
    Ok(offsets.into_iter().map(|o| o / span).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleFit {
    pub center: [f64; 2],
    pub radius: f64,
    pub rms: f64,
}

/// Algebraic least-squares circle `x^2 + y^2 + D x + E y + F = 0`.
pub fn fit_circle(points: &[[f64; 2]]) -> Result<CircleFit> {
    if points.len() < 3 {
        return Err(GeoError::InsufficientSamples("circle fit needs 3 points".into()));
    }
    let a = DMatrix::from_fn(points.len(), 3, |i, j| match j {
        0 => points[i][0],
        1 => points[i][1],
        _ => 1.0,
    });
    let rhs = DVector::from_fn(points.len(), |i, _| -(points[i][0].powi(2) + points[i][1].powi(2)));
    let sol = a
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| GeoError::InsufficientSamples(format!("circle fit failed: {e}")))?;
    let center = [-0.5 * sol[0], -0.5 * sol[1]];
    let r2 = center[0].powi(2) + center[1].powi(2) - sol[2];
    if !(r2 > 0.0) {
        return Err(GeoError::InsufficientSamples("collinear samples admit no circle".into()));
    }
    let radius = r2.sqrt();
    let rms = (points
        .iter()
        .map(|p| ((p[0] - center[0]).hypot(p[1] - center[1]) - radius).powi(2))
        .sum::<f64>()
        / points.len() as f64)
        .sqrt();
    Ok(CircleFit { center, radius, rms })
}

/// Distance from `q` to the polyline through `pts`.
fn polyline_distance(pts: &[[f64; 2]], q: [f64; 2]) -> f64 {
    pts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let len2 = dx * dx + dy * dy;
            let t = if len2 > 0.0 {
                (((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (q[0] - a[0] - t * dx).hypot(q[1] - a[1] - t * dy)
        })
        .fold(f64::INFINITY, f64::min)
}

/// For each `t`, samples the metric circle centered at `ray(t)` through the
/// anchor along chart rays aimed at the horocycle samples, and returns the
/// largest chart distance from those circle points to the horocycle.
pub fn circle_to_horocycle_convergence(ray: &RaySpec, anchor: &PointChart, t_values: &[f64], tol: f64, seed: u64) -> Result<Vec<f64>> {
    if t_values.windows(2).any(|w| !(w[0] < w[1])) || t_values.iter().any(|t| !(*t > 0.0)) {
        return Err(GeoError::DegenerateInput("t values must be positive and increasing".into()));
    }
    let space = ray.space();
    let cloud = limit_sphere_sample(ray, anchor, 41, tol, seed)?;
    let mut ordered: Vec<(f64, [f64; 2])> = cloud.offsets.iter().copied().zip(cloud.points()).collect();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let poly: Vec<[f64; 2]> = ordered.iter().map(|o| o.1).collect();
    t_values
        .par_iter()
        .map(|&t| -> Result<f64> {
            let c = ray.eval(t)?.v();
            let rho = space.dist_raw(c, anchor.v());
            let mut worst: f64 = 0.0;
            for h in &poly {
                let dir = linalg::normalize(linalg::sub([h[0], h[1], 0.0], c))
                    .ok_or_else(|| GeoError::DegenerateInput("circle center on the horocycle".into()))?;
                let f = |s: f64| space.dist_raw(c, linalg::axpy(c, s, dir)) - rho;
                let hi = match space.clip_line(c, dir) {
                    Some((_, hi)) if hi.is_finite() => hi,
                    _ => {
                        let mut hi = 1.0;
                        while f(hi) <= 0.0 && hi < 1e12 {
                            hi *= 2.0;
                        }
                        hi
                    }
                };
                let s = numeric::bisect(f, 0.0, hi, 1e-15, 200).ok_or(GeoError::NoConvergence {
                    what: "metric circle point",
                    residual: f64::NAN,
                })?;
                let q = linalg::axpy(c, s, dir);
                worst = worst.max(polyline_distance(&poly, [q[0], q[1]]));
            }
            Ok(worst)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteReport {
    pub t_values: Vec<f64>,
    /// Sup chart distance between consecutive geodesics on `[0, 1]`.
    pub divergences: Vec<f64>,
    pub final_direction: [f64; 2],
    /// Boundary point of the limit geodesic, for bounded charts.
    pub ideal_endpoint: Option<[f64; 2]>,
    /// Limit geodesic sampled at `GEODESIC_SAMPLES` arclengths on `[0, 1]`.
    pub limit_samples: Vec<[f64; 2]>,
}

fn asymptote_supported(space: &SpaceHandle) -> bool {
    match space.model() {
        Model::Euclidean { dim } => *dim == 2,
        Model::PoincareDisk => true,
        Model::Minkowski(n) => n.is_strictly_convex(),
        Model::Hilbert(d) => matches!(d, HilbertDomain::Ellipse { .. }),
        Model::Sphere => false,
    }
}

/// Geodesics from `p` to `line(t_n)` and the divergence between consecutive
/// ones. The sequence must run monotonically out to `|t| >= 32` on one side.
pub fn asymptote_limit(space: &SpaceHandle, p: &PointChart, line: &GeodesicLine, t_sequence: &[f64], settings: &SearchSettings) -> Result<AsymptoteReport> {
    settings.validate()?;
    if !asymptote_supported(space) {
        return Err(GeoError::UnsupportedModel {
            op: "asymptote limit",
            model: space.name(),
        });
    }
    space.check(p)?;
    let sign = t_sequence.first().map(|t| t.signum()).unwrap_or(0.0);
    let monotone = t_sequence.windows(2).all(|w| w[1].abs() > w[0].abs() && w[1].signum() == sign);
    let far = t_sequence.last().map(|t| t.abs()).unwrap_or(0.0);
    if t_sequence.len() < 2 || sign == 0.0 || !monotone || far < 32.0 {
        return Err(GeoError::DegenerateInput(
            "t sequence must run monotonically to |t| >= 32 on one side".into(),
        ));
    }
    let pv = p.v();
    let (_, gap) = numeric::golden_centered(|t| space.dist_raw(pv, line.eval_raw(t)), -16.0, 16.0, 1e-9, 1e-10);
    if gap < 1e-3 {
        return Err(GeoError::DegenerateInput(format!("point is {gap:e} from the line")));
    }
    let arclengths: Vec<f64> = (0..GEODESIC_SAMPLES).map(|k| k as f64 / (GEODESIC_SAMPLES - 1) as f64).collect();
    let mut dirs = Vec::with_capacity(t_sequence.len());
    let mut paths: Vec<Vec<V3>> = Vec::with_capacity(t_sequence.len());
    for &t in t_sequence {
        let x = line.eval_raw(t);
        let dir = space
            .tangent_raw(pv, x)
            .ok_or_else(|| GeoError::DegenerateInput("line point coincides with p".into()))?;
        paths.push(arclengths.iter().map(|s| space.shoot_raw(pv, dir, *s)).collect());
        dirs.push(dir);
    }
    let divergences: Vec<f64> = paths
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(a, b)| linalg::dist(*a, *b))
                .fold(0.0, f64::max)
        })
        .collect();
    let last = *divergences.last().unwrap_or(&f64::INFINITY);
    if !(last < 1e-3) {
        return Err(GeoError::NoConvergence {
            what: "asymptote",
            residual: last,
        });
    }
    let dir = *dirs.last().unwrap_or(&[1.0, 0.0, 0.0]);
    let ideal_endpoint = match space.model() {
        Model::PoincareDisk => {
            let e = disk::ideal_endpoint(pv, dir);
            Some([e[0], e[1]])
        }
        Model::Hilbert(d) => {
            let (_, fwd) = d.line_params(pv, dir);
            let e = linalg::axpy(pv, fwd, dir);
            Some([e[0], e[1]])
        }
        _ => None,
    };
    Ok(AsymptoteReport {
        t_values: t_sequence.to_vec(),
        divergences,
        final_direction: [dir[0], dir[1]],
        ideal_endpoint,
        limit_samples: paths.last().map(|p| p.iter().map(|v| [v[0], v[1]]).collect()).unwrap_or_default(),
    })
}

/// `d(x, y) + d(y, z) - d(x, z)` for `y` on the chart segment from `x` to `z`.
/// On the sphere the points are taken as given, since no ambient chord lies
/// on the sphere.
pub fn additivity_straightness_residual(space: &SpaceHandle, x: &PointChart, y: &PointChart, z: &PointChart) -> Result<f64> {
    for (a, b) in [(x, y), (y, z), (x, z)] {
        space.check(a)?;
        space.check(b)?;
        if a.chart_distance(b) <= 1e-12 {
            return Err(GeoError::DegenerateInput("coincident points".into()));
        }
    }
    if !matches!(space.model(), Model::Sphere) {
        let (u, w) = (linalg::sub(y.v(), x.v()), linalg::sub(z.v(), x.v()));
        let sine = linalg::norm(linalg::cross(u, w)) / (linalg::norm(u) * linalg::norm(w));
        let t = linalg::dot(u, w) / linalg::dot(w, w);
        if sine > 1e-9 || !(t > 0.0 && t < 1.0) {
            return Err(GeoError::DegenerateInput("middle point is off the chart segment".into()));
        }
    }
    Ok(space.distance(x, y)? + space.distance(y, z)? - space.distance(x, z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn busemann_examples() {
        let e = SpaceHandle::euclidean(2).unwrap();
        let ray = RaySpec::new(&e, e.point(&[0.0, 0.0]).unwrap(), &[1.0, 0.0]).unwrap();
        let b = busemann_value(&ray, &e.point(&[2.0, 0.0]).unwrap(), 1e-9).unwrap();
        assert_eq!(b.value, -2.0);
        assert!(b.converged);
        let b = busemann_value(&ray, &e.point(&[0.0, 1.0]).unwrap(), 1e-6).unwrap();
        assert!(b.converged && b.value.abs() < 1e-5 && b.cauchy_gap <= 1e-6);

        let k = SpaceHandle::poincare_disk();
        let ray = RaySpec::new(&k, k.point(&[0.0, 0.0]).unwrap(), &[1.0, 0.0]).unwrap();
        let b = busemann_value(&ray, &k.point(&[0.0, 0.0]).unwrap(), 1e-9).unwrap();
        assert!(b.value.abs() < 1e-12 && b.converged);
    }

    #[test]
    fn level_sets() {
        let e = SpaceHandle::euclidean(2).unwrap();
        let ray = RaySpec::new(&e, e.point(&[0.0, 0.0]).unwrap(), &[1.0, 0.0]).unwrap();
        let c = limit_sphere_sample(&ray, &e.point(&[0.0, 0.0]).unwrap(), 20, 1e-9, 1).unwrap();
        assert!(c.samples.iter().all(|p| p.coords()[0].abs() < 1e-5));
        assert!(horocycle_line_fit_residual(&c).unwrap() < 1e-6);

        let k = SpaceHandle::poincare_disk();
        let ray = RaySpec::new(&k, k.point(&[0.0, 0.0]).unwrap(), &[1.0, 0.0]).unwrap();
        let c = limit_sphere_sample(&ray, &k.point(&[0.0, 0.0]).unwrap(), 30, 1e-9, 1).unwrap();
        let fit = fit_circle(&c.points()).unwrap();
        assert!((fit.center[0] - 0.5).abs() < 1e-3 && fit.center[1].abs() < 1e-3 && (fit.radius - 0.5).abs() < 1e-3, "{fit:?}");
        assert!(horocycle_line_fit_residual(&c).unwrap() > 1e-2);

        let m = SpaceHandle::minkowski_p(4.0).unwrap();
        let ray = RaySpec::new(&m, m.point(&[0.0, 0.0]).unwrap(), &[1.0, 0.0]).unwrap();
        let c = limit_sphere_sample(&ray, &m.point(&[0.0, 0.0]).unwrap(), 30, 1e-9, 1).unwrap();
        assert!(horocycle_line_fit_residual(&c).unwrap() < 1e-4);
    }

    #[test]
    fn circle_fit_recovers_circle() {
        let pts: Vec<[f64; 2]> = (0..20)
            .map(|k| {
                let a = 0.3 * k as f64;
                [1.0 + 2.0 * a.cos(), -0.5 + 2.0 * a.sin()]
            })
            .collect();
        let f = fit_circle(&pts).unwrap();
        assert!((f.center[0] - 1.0).abs() < 1e-12 && (f.center[1] + 0.5).abs() < 1e-12 && (f.radius - 2.0).abs() < 1e-12);
    }

    #[test]
    fn circles_flatten() {
        let e = SpaceHandle::euclidean(2).unwrap();
        let ray = RaySpec::new(&e, e.point(&[0.0, 0.0]).unwrap(), &[1.0, 0.0]).unwrap();
        let seq = circle_to_horocycle_convergence(&ray, &e.point(&[0.0, 0.0]).unwrap(), &[4.0, 8.0, 16.0, 32.0], 1e-9, 1).unwrap();
        assert!(seq.windows(2).all(|w| w[1] < w[0]), "{seq:?}");
        // oracle: sagitta t - sqrt(t^2 - w^2) at the window edge
        let w = HOROCYCLE_WINDOW;
        for (v, t) in seq.iter().zip([4.0f64, 8.0, 16.0, 32.0]) {
            let sag = t - (t * t - w * w).sqrt();
            assert!(*v <= sag * 1.0001 && *v >= 0.5 * sag, "{v} {sag}");
        }
    }

    #[test]
    fn asymptotes() {
        let set = SearchSettings::with_seed(1);
        let k = SpaceHandle::poincare_disk();
        let line = GeodesicLine::new(&k, k.point(&[0.0, 0.0]).unwrap(), &[1.0, 0.0]).unwrap();
        let p = k.point(&[0.0, 0.5]).unwrap();
        let fwd: Vec<f64> = (0..8).map(|i| 2f64.powi(i + 1)).collect();
        let bwd: Vec<f64> = fwd.iter().map(|t| -t).collect();
        let a = asymptote_limit(&k, &p, &line, &fwd, &set).unwrap();
        let e = a.ideal_endpoint.unwrap();
        assert!((e[0] - 1.0).abs() < 1e-3 && e[1].abs() < 1e-3, "{e:?}");
        let b = asymptote_limit(&k, &p, &line, &bwd, &set).unwrap();
        let e = b.ideal_endpoint.unwrap();
        assert!((e[0] + 1.0).abs() < 1e-3 && e[1].abs() < 1e-3);

        let s = SpaceHandle::sphere();
        assert!(GeodesicLine::new(&s, s.point(&[1.0, 0.0, 0.0]).unwrap(), &[0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn straightness_examples() {
        let h = SpaceHandle::hilbert_unit_disk();
        let p = |x: f64| h.point(&[x, 0.0]).unwrap();
        let r = additivity_straightness_residual(&h, &p(-0.5), &p(0.0), &p(0.5)).unwrap();
        assert!(r.abs() < 1e-12);
        let d = h.distance(&p(-0.5), &p(0.5)).unwrap();
        assert!((d - 3f64.ln()).abs() < 1e-12);

        let e = SpaceHandle::euclidean(2).unwrap();
        let q = |x: f64| e.point(&[x, 2.0 * x]).unwrap();
        assert_eq!(additivity_straightness_residual(&e, &q(0.0), &q(0.25), &q(1.0)).unwrap(), 0.0);

        // a latitude circle is straight in longitude but is not a great circle
        let s = SpaceHandle::sphere();
        let lat = 0.6f64;
        let pt = |lon: f64| PointChart::sphere_normalized([lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()]).unwrap();
        let r = additivity_straightness_residual(&s, &pt(0.0), &pt(0.5 * PI / 2.0), &pt(PI / 2.0)).unwrap();
        assert!(r > 1e-3, "{r}");
    }
}
