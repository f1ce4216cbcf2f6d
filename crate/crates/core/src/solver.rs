//! Midpoints, betweenness witnesses and geodesic extension by seeded
//! simplex descent, plus numeric probes of the local G-space axioms.

use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::geometry::SPHERE_CAP;
use crate::linalg::{self, V3};
use crate::models::{Model, SpaceHandle};
use crate::numeric;
use crate::point::PointChart;
use crate::rng;

const STREAM_MIDPOINT: u64 = 0x6d69_6470;
const STREAM_EXTEND: u64 = 0x6578_7465;
const STREAM_UNIQUE: u64 = 0x756e_6971;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSettings {
    pub tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings {
            tol: 1e-6,
            max_iter: 2000,
            restarts: 8,
            seed: 0,
        }
    }
}

impl SearchSettings {
    pub fn with_seed(seed: u64) -> Self {
        SearchSettings {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(GeoError::InvalidSettings(format!("tol {} must be > 0", self.tol)));
        }
        if self.max_iter < 100 {
            return Err(GeoError::InvalidSettings(format!(
                "max_iter {} must be >= 100",
                self.max_iter
            )));
        }
        if self.restarts < 1 {
            return Err(GeoError::InvalidSettings("restarts must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Betweenness,
    Extendability,
    UniqueExtension,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomProbeReport {
    pub axiom: Axiom,
    pub residual: f64,
    pub witness: PointChart,
    pub passed: bool,
    pub tol: f64,
    /// Set when the probe could not run as posed (for example a
    /// near-antipodal sphere input).
    pub flag: Option<String>,
}

/// Chart parametrization used by the descent: flat charts use their own
/// coordinates, the sphere a gnomonic chart around `center`.
struct Param<'a> {
    space: &'a SpaceHandle,
    center: V3,
    basis: Option<(V3, V3)>,
}

impl<'a> Param<'a> {
    fn new(space: &'a SpaceHandle, center: V3) -> Self {
        let basis = match space.model() {
            Model::Sphere => {
                let c = center;
                let seed = if c[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
                let e1 = linalg::normalize(linalg::sub(seed, linalg::scale(c, linalg::dot(seed, c))))
                    .unwrap_or([0.0, 0.0, 1.0]);
                let e2 = linalg::cross(c, e1);
                Some((e1, e2))
            }
            _ => None,
        };
        Param { space, center, basis }
    }

    fn origin(&self) -> Vec<f64> {
        match self.basis {
            Some(_) => vec![0.0, 0.0],
            None => self.center[..self.space.chart_dim()].to_vec(),
        }
    }

    fn point(&self, u: &[f64]) -> V3 {
        let raw = match self.basis {
            Some((e1, e2)) => linalg::add(
                self.center,
                linalg::add(linalg::scale(e1, u[0]), linalg::scale(e2, u[1])),
            ),
            None => {
                let mut v = [0.0; 3];
                v[..u.len()].copy_from_slice(u);
                v
            }
        };
        self.space.project_into_domain(raw)
    }
}

/// Seeded multi-start simplex descent of `objective` over chart points near
/// `center`. Returns the best point and its objective value; ties go to the
/// lowest restart index.
fn descend(
    space: &SpaceHandle,
    objective: &(impl Fn(V3) -> f64 + Sync),
    center: V3,
    scale: f64,
    settings: &SearchSettings,
    stream: u64,
) -> (V3, f64) {
    let center = space.project_into_domain(center);
    let param = Param::new(space, center);
    let step = 0.1 * scale;
    let runs: Vec<(V3, f64)> = (0..settings.restarts)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(settings.seed, stream, i as u64);
            let start: Vec<f64> = param
                .origin()
                .into_iter()
                .map(|c| {
                    let g: f64 = StandardNormal.sample(&mut r);
                    c + step * g
                })
                .collect();
            let f = |u: &[f64]| objective(param.point(u));
            let m = numeric::nelder_mead(f, &start, step, 1e-15, 1e-32, settings.max_iter);
            (param.point(&m.x), m.fx)
        })
        .collect();
    runs.into_iter()
        .fold(None, |best: Option<(V3, f64)>, cand| match best {
            Some(b) if b.1 <= cand.1 => Some(b),
            _ => Some(cand),
        })
        .unwrap_or((center, f64::INFINITY))
}

fn affine_center(space: &SpaceHandle, x: V3, y: V3, t: f64) -> V3 {
    let v = linalg::axpy(x, t, linalg::sub(y, x));
    match space.model() {
        Model::Sphere => linalg::normalize(v).unwrap_or(x),
        _ => v,
    }
}

fn chart_scale(space: &SpaceHandle, x: V3, y: V3) -> f64 {
    match space.model() {
        Model::Sphere => linalg::angle_between(x, y),
        _ => linalg::dist(x, y),
    }
}

fn midpoint_residual(space: &SpaceHandle, x: V3, y: V3, z: V3) -> f64 {
    let half = 0.5 * space.dist_raw(x, y);
    (space.dist_raw(x, z) - half).abs() + (space.dist_raw(z, y) - half).abs()
}

fn midpoint_objective(space: &SpaceHandle, x: V3, y: V3) -> impl Fn(V3) -> f64 + Sync + '_ {
    let dxy = space.dist_raw(x, y);
    move |z| {
        let (a, b) = (space.dist_raw(x, z), space.dist_raw(z, y));
        (a + b - dxy).powi(2) + (a - b).powi(2)
    }
}

fn distinct_pair(space: &SpaceHandle, x: &PointChart, y: &PointChart) -> Result<f64> {
    let d = space.distance(x, y)?;
    if x.chart_distance(y) <= 1e-12 {
        return Err(GeoError::DegenerateInput("coincident endpoints".into()));
    }
    Ok(d)
}

/// Point at half distance from `x` and `y`.
pub fn midpoint_search(space: &SpaceHandle, x: &PointChart, y: &PointChart, settings: &SearchSettings) -> Result<PointChart> {
    settings.validate()?;
    let d = distinct_pair(space, x, y)?;
    if matches!(space.model(), Model::Sphere) && d > PI - SPHERE_CAP {
        return Err(GeoError::AmbiguousMidpoint(format!(
            "sphere points {d:.6} apart have no unique midpoint"
        )));
    }
    let z = space.geodesic_point(x, y, 0.5)?;
    if midpoint_residual(space, x.v(), y.v(), z.v()) <= settings.tol {
        return Ok(z);
    }
    midpoint_by_descent(space, x, y, settings)
}

/// Midpoint found by simplex descent alone, ignoring any closed form.
pub fn midpoint_by_descent(space: &SpaceHandle, x: &PointChart, y: &PointChart, settings: &SearchSettings) -> Result<PointChart> {
    settings.validate()?;
    distinct_pair(space, x, y)?;
    let (xv, yv) = (x.v(), y.v());
    let g = midpoint_objective(space, xv, yv);
    let (z, _) = descend(
        space,
        &g,
        affine_center(space, xv, yv, 0.5),
        chart_scale(space, xv, yv),
        settings,
        STREAM_MIDPOINT,
    );
    let residual = midpoint_residual(space, xv, yv, z);
    if residual > settings.tol {
        return Err(GeoError::NoConvergence { what: "midpoint", residual });
    }
    space.point_v(z)
}

/// Witness `y` with `d(x, y) + d(y, z) = d(x, z)`, sought by descent.
pub fn betweenness_witness(space: &SpaceHandle, x: &PointChart, z: &PointChart, settings: &SearchSettings) -> Result<AxiomProbeReport> {
    settings.validate()?;
    distinct_pair(space, x, z)?;
    let (xv, zv) = (x.v(), z.v());
    let g = midpoint_objective(space, xv, zv);
    let (y, _) = descend(
        space,
        &g,
        affine_center(space, xv, zv, 0.5),
        chart_scale(space, xv, zv),
        settings,
        STREAM_MIDPOINT,
    );
    let witness = space.point_v(y)?;
    if witness.chart_distance(x) <= 1e-12 || witness.chart_distance(z) <= 1e-12 {
        return Err(GeoError::NoConvergence {
            what: "betweenness witness",
            residual: 0.0,
        });
    }
    let residual = (space.distance(x, &witness)? + space.distance(&witness, z)? - space.distance(x, z)?).abs();
    Ok(AxiomProbeReport {
        axiom: Axiom::Betweenness,
        residual,
        witness,
        passed: residual <= settings.tol,
        tol: settings.tol,
        flag: None,
    })
}

struct Extension {
    z: PointChart,
    length_error: f64,
    between: f64,
}

fn extend_inner(space: &SpaceHandle, x: &PointChart, y: &PointChart, delta: f64, settings: &SearchSettings, stream: u64) -> Result<Extension> {
    settings.validate()?;
    let d = distinct_pair(space, x, y)?;
    if !(delta > 0.0) || delta > 0.5 * d {
        return Err(GeoError::DegenerateInput(format!(
            "extension step {delta} must lie in (0, d(x,y)/2 = {})",
            0.5 * d
        )));
    }
    if matches!(space.model(), Model::Sphere) && d + delta > PI - SPHERE_CAP {
        return Err(GeoError::AmbiguousGeodesic(format!(
            "extension to length {:.6} passes the sphere cap",
            d + delta
        )));
    }
    let (xv, yv) = (x.v(), y.v());
    let target = d + delta;
    let h = |z: V3| {
        let dxz = space.dist_raw(xv, z);
        let between = (d + space.dist_raw(yv, z) - dxz).max(0.0);
        (dxz - target).powi(2) + between
    };
    let (z, _) = descend(
        space,
        &h,
        affine_center(space, xv, yv, target / d),
        chart_scale(space, xv, yv),
        settings,
        stream,
    );
    let z = space.point_v(z)?;
    let dxz = space.distance(x, &z)?;
    Ok(Extension {
        z,
        length_error: (dxz - target).abs(),
        between: (d + space.distance(y, &z)? - dxz).abs(),
    })
}

/// Point `z` beyond `y` with `d(x, z) = d(x, y) + delta` and `y` between `x` and `z`.
pub fn extend_geodesic(space: &SpaceHandle, x: &PointChart, y: &PointChart, delta: f64, settings: &SearchSettings) -> Result<PointChart> {
    let e = extend_inner(space, x, y, delta, settings, STREAM_EXTEND)?;
    let residual = e.length_error.max(e.between);
    if residual > settings.tol {
        return Err(GeoError::NoConvergence {
            what: "geodesic extension",
            residual,
        });
    }
    Ok(e.z)
}

/// [`extend_geodesic`] as an axiom probe: the residual is the worse of the
/// length and betweenness errors.
pub fn extendability_probe(space: &SpaceHandle, x: &PointChart, y: &PointChart, delta: f64, settings: &SearchSettings) -> Result<AxiomProbeReport> {
    match extend_inner(space, x, y, delta, settings, STREAM_EXTEND) {
        Ok(e) => {
            let residual = e.length_error.max(e.between);
            Ok(AxiomProbeReport {
                axiom: Axiom::Extendability,
                residual,
                witness: e.z,
                passed: residual <= settings.tol,
                tol: settings.tol,
                flag: None,
            })
        }
        Err(GeoError::AmbiguousGeodesic(why)) => Ok(flagged(Axiom::Extendability, *y, settings.tol, why)),
        Err(e) => Err(e),
    }
}

fn flagged(axiom: Axiom, witness: PointChart, tol: f64, why: String) -> AxiomProbeReport {
    AxiomProbeReport {
        axiom,
        residual: f64::INFINITY,
        witness,
        passed: false,
        tol,
        flag: Some(format!("ambiguous geodesic: {why}")),
    }
}

/// Runs the extension from `restarts` independent seeds and measures how far
/// apart the results land.
pub fn extension_uniqueness_probe(space: &SpaceHandle, x: &PointChart, y: &PointChart, delta: f64, settings: &SearchSettings) -> Result<AxiomProbeReport> {
    settings.validate()?;
    let d = distinct_pair(space, x, y)?;
    if matches!(space.model(), Model::Sphere) && d + delta > PI - SPHERE_CAP {
        return Ok(flagged(
            Axiom::UniqueExtension,
            *y,
            settings.tol,
            format!("extension to length {:.6} passes the sphere cap", d + delta),
        ));
    }
    let single = SearchSettings {
        restarts: 1,
        ..*settings
    };
    let ends: Vec<PointChart> = (0..settings.restarts)
        .into_par_iter()
        .map(|i| {
            let s = SearchSettings {
                seed: rng::derive_seed(settings.seed, STREAM_UNIQUE, i as u64),
                ..single
            };
            extend_inner(space, x, y, delta, &s, STREAM_EXTEND).map(|e| e.z)
        })
        .collect::<Result<_>>()?;
    let mut residual: f64 = 0.0;
    for (i, a) in ends.iter().enumerate() {
        for b in &ends[i + 1..] {
            residual = residual.max(a.chart_distance(b));
        }
    }
    Ok(AxiomProbeReport {
        axiom: Axiom::UniqueExtension,
        residual,
        witness: ends[0],
        passed: residual <= 10.0 * settings.tol,
        tol: 10.0 * settings.tol,
        flag: None,
    })
}
