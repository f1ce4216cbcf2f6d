//! Bisectors and their flatness, feet of perpendiculars, and convexity of
//! metric spheres.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::geometry::{GeodesicSegment, DEGENERACY_FLOOR};
use crate::linalg::{self, V3};
use crate::models::{Model, SpaceHandle};
use crate::numeric;
use crate::point::PointChart;
use crate::rng;
use crate::sampling::Region;
use crate::solver::SearchSettings;

const STREAM_BISECTOR: u64 = 0x6269_7365;
const STREAM_PERP: u64 = 0x7065_7270;
const STREAM_SPHERE: u64 = 0x7370_6872;

/// Residual bound for accepted bisector samples.
pub const BISECTOR_RESIDUAL: f64 = 1e-8;
/// Interior points tested on each segment.
pub const SEGMENT_SAMPLES: usize = 17;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectorCloud {
    pub focus_p: PointChart,
    pub focus_q: PointChart,
    pub samples: Vec<PointChart>,
    pub residuals: Vec<f64>,
    pub scan_lines: usize,
}

fn planar(space: &SpaceHandle, op: &'static str) -> Result<()> {
    if matches!(space.model(), Model::Sphere) {
        return Err(GeoError::UnsupportedModel { op, model: space.name() });
    }
    if space.chart_dim() != 2 {
        return Err(GeoError::UnsupportedDim {
            kind: format!("{op} on {}", space.name()),
            dim: space.chart_dim(),
        });
    }
    Ok(())
}

/// Parameter interval of `o + s dir` inside the region.
fn region_clip(region: &Region, o: V3, dir: V3) -> Option<(f64, f64)> {
    match region {
        Region::Box { lo, hi } => {
            let (mut a, mut b) = (f64::NEG_INFINITY, f64::INFINITY);
            for i in 0..lo.len() {
                if dir[i] == 0.0 {
                    if o[i] < lo[i] || o[i] > hi[i] {
                        return None;
                    }
                    continue;
                }
                let (t1, t2) = ((lo[i] - o[i]) / dir[i], (hi[i] - o[i]) / dir[i]);
                a = a.max(t1.min(t2));
                b = b.min(t1.max(t2));
            }
            (a < b).then_some((a, b))
        }
        Region::Ball { center, radius } => {
            let mut c = [0.0; 3];
            c[..center.len()].copy_from_slice(center);
            let w = linalg::sub(o, c);
            let qa = linalg::dot(dir, dir);
            let qb = 2.0 * linalg::dot(w, dir);
            let qc = linalg::dot(w, w) - radius * radius;
            let disc = qb * qb - 4.0 * qa * qc;
            (disc > 0.0).then(|| {
                let sq = disc.sqrt();
                ((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa))
            })
        }
        _ => None,
    }
}

fn scan_interval(space: &SpaceHandle, region: &Region, o: V3, dir: V3) -> Option<(f64, f64)> {
    let (a, b) = region_clip(region, o, dir)?;
    let (c, d) = space.clip_line(o, dir)?;
    let (lo, hi) = (a.max(c), b.min(d));
    (lo < hi).then_some((lo, hi))
}

/// Samples the bisector of `p` and `q` by bracketing sign changes of
/// `d(., p) - d(., q)` along seeded chart lines through the region.
pub fn bisector_sample(
    space: &SpaceHandle,
    p: &PointChart,
    q: &PointChart,
    region: &Region,
    n: usize,
    settings: &SearchSettings,
) -> Result<BisectorCloud> {
    planar(space, "bisector sampling")?;
    region.validate(space)?;
    if space.distance(p, q)? < DEGENERACY_FLOOR {
        return Err(GeoError::DegenerateInput("bisector foci coincide".into()));
    }
    let (pv, qv) = (p.v(), q.v());
    let axis = linalg::sub(qv, pv);
    let axis_angle = axis[1].atan2(axis[0]);
    let f = |x: V3| space.dist_raw(x, pv) - space.dist_raw(x, qv);

    let line = |k: usize| -> Option<(PointChart, f64)> {
        let mut r = rng::stream(settings.seed, STREAM_BISECTOR, k as u64);
        let o = region.sample(space, &mut r).ok()?.v();
        let th = axis_angle + r.random_range(-PI / 3.0..PI / 3.0);
        let dir = [th.cos(), th.sin(), 0.0];
        let (lo, hi) = scan_interval(space, region, o, dir)?;
        let g = |s: f64| f(linalg::axpy(o, s, dir));
        let (a, b) = numeric::sign_brackets(g, lo, hi, 32).into_iter().next()?;
        let s = numeric::bisect(g, a, b, 1e-15 * (hi - lo).max(1.0), 200)?;
        let x = space.point_v(linalg::axpy(o, s, dir)).ok()?;
        let res = f(x.v()).abs();
        (res <= BISECTOR_RESIDUAL).then_some((x, res))
    };

    let mut samples: Vec<PointChart> = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut k = 0;
    let mut first_round_hits = 0;
    let budget = 8 * n.max(1);
    while samples.len() < n && k < budget {
        let batch = (n - samples.len()).max(8);
        let found: Vec<Option<(PointChart, f64)>> = (k..k + batch).into_par_iter().map(line).collect();
        for (i, hit) in found.into_iter().enumerate() {
            if k + i < n && hit.is_some() {
                first_round_hits += 1;
            }
            if let Some((x, res)) = hit {
                let fresh = samples.iter().all(|s| s.chart_distance(&x) >= DEGENERACY_FLOOR);
                if fresh && samples.len() < n {
                    samples.push(x);
                    residuals.push(res);
                }
            }
        }
        k += batch;
        if k >= n && 2 * first_round_hits < n {
            return Err(GeoError::EmptyBisectorRegion {
                found: first_round_hits,
                wanted: n,
            });
        }
    }
    if samples.len() < n {
        return Err(GeoError::EmptyBisectorRegion {
            found: samples.len(),
            wanted: n,
        });
    }
    Ok(BisectorCloud {
        focus_p: *p,
        focus_q: *q,
        samples,
        residuals,
        scan_lines: k,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub n_pairs: usize,
    pub worst_defect: f64,
    pub worst_pair: [PointChart; 2],
    pub flat: bool,
    pub threshold: f64,
    pub defects: Vec<f64>,
    pub pairs: Vec<[PointChart; 2]>,
}

/// Chart box centered at the chart midpoint of the foci, 1.5 focal
/// separations on each side.
pub fn default_bisector_region(p: &PointChart, q: &PointChart) -> Region {
    let (pv, qv) = (p.v(), q.v());
    let h = 1.5 * linalg::dist(pv, qv);
    let m = linalg::scale(linalg::add(pv, qv), 0.5);
    Region::Box {
        lo: vec![m[0] - h, m[1] - h],
        hi: vec![m[0] + h, m[1] + h],
    }
}

/// Worst bisector defect along geodesic segments joining pairs of
/// bisector points.
pub fn flatness_test(
    space: &SpaceHandle,
    p: &PointChart,
    q: &PointChart,
    n_pairs: usize,
    threshold: f64,
    settings: &SearchSettings,
) -> Result<FlatnessReport> {
    flatness_test_in(space, p, q, &default_bisector_region(p, q), n_pairs, threshold, settings)
}

pub fn flatness_test_in(
    space: &SpaceHandle,
    p: &PointChart,
    q: &PointChart,
    region: &Region,
    n_pairs: usize,
    threshold: f64,
    settings: &SearchSettings,
) -> Result<FlatnessReport> {
    if n_pairs == 0 {
        return Err(GeoError::InsufficientSamples("no pairs requested".into()));
    }
    let cloud = bisector_sample(space, p, q, region, 2 * n_pairs, settings)?;
    let (pv, qv) = (p.v(), q.v());
    let pairs: Vec<[PointChart; 2]> = cloud.samples.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
    let defects: Vec<f64> = pairs
        .par_iter()
        .map(|[a, b]| -> Result<f64> {
            let seg = GeodesicSegment::new(space, *a, *b)?;
            Ok((1..=SEGMENT_SAMPLES)
                .map(|j| {
                    let z = seg.eval_raw(j as f64 / (SEGMENT_SAMPLES + 1) as f64);
                    (space.dist_raw(z, pv) - space.dist_raw(z, qv)).abs()
                })
                .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    let (worst_idx, worst_defect) = defects
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
    Ok(FlatnessReport {
        n_pairs,
        worst_defect,
        worst_pair: pairs[worst_idx],
        flat: worst_defect <= threshold,
        threshold,
        defects,
        pairs,
    })
}

/// Point of the segment nearest to `x`, by golden-section search on the
/// segment parameter.
pub fn foot_of_perpendicular(space: &SpaceHandle, x: &PointChart, segment: &GeodesicSegment, settings: &SearchSettings) -> Result<PointChart> {
    settings.validate()?;
    space.check(x)?;
    let xv = x.v();
    let (t, d) = numeric::golden_centered(|t| space.dist_raw(xv, segment.eval_raw(t)), 0.0, 1.0, 1e-9, 1e-10);
    if d < DEGENERACY_FLOOR {
        return Err(GeoError::DegenerateInput(format!("point lies on the segment ({d:e})")));
    }
    space.point_v(segment.eval_raw(t))
}

/// Foot parameter of `x` on the line through `base` with direction `dir`,
/// searched over `[-reach, reach]`.
fn line_foot(space: &SpaceHandle, x: V3, base: V3, dir: V3, reach: f64) -> f64 {
    numeric::golden_centered(|t| space.dist_raw(x, space.line_raw(base, dir, t)), -reach, reach, 1e-11, 1e-10).0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerpendicularConfig {
    pub index: usize,
    /// Intersection of `g` and `h`; the foot of `b` on `g`.
    pub a: PointChart,
    pub b: PointChart,
    /// Representative point of `g`.
    pub c: PointChart,
    /// Foot of `c` on `h`.
    pub foot: PointChart,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerpendicularityReport {
    pub configs: Vec<PerpendicularConfig>,
    pub max_residual: f64,
}

fn probe_region(space: &SpaceHandle) -> Region {
    match space.model() {
        Model::Euclidean { .. } | Model::Minkowski(_) => Region::square(1.0),
        Model::PoincareDisk => Region::ball(0.4),
        _ => Region::ball(0.3),
    }
}

const LINE_REACH: f64 = 4.0;

fn perpendicular_config(space: &SpaceHandle, k: usize, settings: &SearchSettings) -> Result<PerpendicularConfig> {
    let mut r = rng::stream(settings.seed, STREAM_PERP, k as u64);
    let a = probe_region(space).sample(space, &mut r)?;
    let theta = r.random_range(0.0..PI);
    let radius = r.random_range(0.3..1.0);
    let s0 = r.random_range(0.3..1.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 };
    let av = a.v();
    let g_dir = [theta.cos(), theta.sin(), 0.0];

    // b at distance `radius` from a, leaving at the angle whose foot on g is a
    let tau = |phi: f64| {
        let b = space.shoot_raw(av, [phi.cos(), phi.sin(), 0.0], radius);
        line_foot(space, b, av, g_dir, LINE_REACH)
    };
    let phi = numeric::bisect(tau, theta + 0.05, theta + PI - 0.05, 1e-13, 200).ok_or(
        GeoError::NoConvergence {
            what: "perpendicular construction",
            residual: f64::NAN,
        },
    )?;
    let b = space.point_v(space.shoot_raw(av, [phi.cos(), phi.sin(), 0.0], radius))?;
    let c = space.point_v(space.line_raw(av, g_dir, s0))?;

    // foot of c on h, the line b -> a
    let bv = b.v();
    let h_dir = space
        .tangent_raw(bv, av)
        .ok_or_else(|| GeoError::DegenerateInput("b coincides with a".into()))?;
    let t = line_foot(space, c.v(), bv, h_dir, radius + LINE_REACH);
    let foot = space.point_v(space.line_raw(bv, h_dir, t))?;
    Ok(PerpendicularConfig {
        index: k,
        a,
        b,
        c,
        residual: space.distance(&foot, &a)?,
        foot,
    })
}

/// For seeded pairs of lines `g` and `h` with `h` perpendicular to `g` (the
/// foot of a point of `h` on `g` is the intersection), measures how far the
/// foot of a point of `g` on `h` lands from the intersection.
pub fn perpendicularity_symmetry_probe(space: &SpaceHandle, n_configs: usize, settings: &SearchSettings) -> Result<PerpendicularityReport> {
    planar(space, "perpendicularity probe")?;
    settings.validate()?;
    let configs: Vec<PerpendicularConfig> = (0..n_configs)
        .into_par_iter()
        .map(|k| perpendicular_config(space, k, settings))
        .collect::<Result<_>>()?;
    let max_residual = configs.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(PerpendicularityReport { configs, max_residual })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePair {
    pub x1: PointChart,
    pub x2: PointChart,
    pub overshoot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereConvexityReport {
    pub n_pairs: usize,
    pub violations: usize,
    pub worst_overshoot: f64,
    pub tol: f64,
    pub pairs: Vec<SpherePair>,
}

/// Point of the metric sphere around `center` hit by the chart ray at angle `phi`.
fn sphere_point(space: &SpaceHandle, center: V3, radius: f64, phi: f64, basis: Option<(V3, V3)>) -> Result<V3> {
    if let Some((e1, e2)) = basis {
        let dir = linalg::add(linalg::scale(e1, phi.cos()), linalg::scale(e2, phi.sin()));
        return Ok(space.shoot_raw(center, dir, radius));
    }
    let u = [phi.cos(), phi.sin(), 0.0];
    let f = |s: f64| space.dist_raw(center, linalg::axpy(center, s, u)) - radius;
    let hi = match space.clip_line(center, u) {
        Some((_, hi)) if hi.is_finite() => hi,
        Some(_) => {
            let mut hi = radius.max(1.0);
            while f(hi) <= 0.0 && hi < 1e12 {
                hi *= 2.0;
            }
            hi
        }
        None => 0.0,
    };
    if !(f(hi) > 0.0) {
        return Err(GeoError::DegenerateInput(format!(
            "metric ball of radius {radius} leaves the chart domain"
        )));
    }
    let s = numeric::bisect(f, 0.0, hi, 1e-15 * hi.max(1.0), 200).ok_or(GeoError::NoConvergence {
        what: "metric sphere point",
        residual: f64::NAN,
    })?;
    Ok(linalg::axpy(center, s, u))
}

/// Samples pairs on the metric sphere and checks that the geodesic joining
/// them stays inside the ball.
pub fn sphere_convexity_probe(space: &SpaceHandle, center: &PointChart, radius: f64, n: usize, settings: &SearchSettings) -> Result<SphereConvexityReport> {
    settings.validate()?;
    space.check(center)?;
    if !(radius > 0.0) {
        return Err(GeoError::DegenerateInput(format!("radius {radius} must be > 0")));
    }
    let cv = center.v();
    let basis = match space.model() {
        Model::Sphere => {
            if radius >= PI / 2.0 {
                return Err(GeoError::DegenerateInput("sphere radius must be below pi/2".into()));
            }
            let seed = if cv[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let e1 = linalg::normalize(linalg::sub(seed, linalg::scale(cv, linalg::dot(seed, cv))))
                .unwrap_or([0.0, 0.0, 1.0]);
            Some((e1, linalg::cross(cv, e1)))
        }
        _ if space.chart_dim() != 2 => {
            return Err(GeoError::UnsupportedDim {
                kind: "sphere convexity probe".into(),
                dim: space.chart_dim(),
            })
        }
        _ => None,
    };
    let pairs: Vec<SpherePair> = (0..n)
        .into_par_iter()
        .map(|k| -> Result<SpherePair> {
            let mut r = rng::stream(settings.seed, STREAM_SPHERE, k as u64);
            let (p1, p2) = (r.random_range(0.0..2.0 * PI), r.random_range(0.0..2.0 * PI));
            let x1 = space.point_v(sphere_point(space, cv, radius, p1, basis)?)?;
            let x2 = space.point_v(sphere_point(space, cv, radius, p2, basis)?)?;
            let overshoot = if x1.chart_distance(&x2) < DEGENERACY_FLOOR {
                space.distance(center, &x1)? - radius
            } else {
                let seg = GeodesicSegment::new(space, x1, x2)?;
                (1..=SEGMENT_SAMPLES)
                    .map(|j| space.dist_raw(cv, seg.eval_raw(j as f64 / (SEGMENT_SAMPLES + 1) as f64)) - radius)
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            Ok(SpherePair { x1, x2, overshoot })
        })
        .collect::<Result<_>>()?;
    let violations = pairs.iter().filter(|p| p.overshoot > settings.tol).count();
    let worst_overshoot = pairs.iter().map(|p| p.overshoot).fold(f64::NEG_INFINITY, f64::max);
    Ok(SphereConvexityReport {
        n_pairs: n,
        violations,
        worst_overshoot,
        tol: settings.tol,
        pairs,
    })
}
