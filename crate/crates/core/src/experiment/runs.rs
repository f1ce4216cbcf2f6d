use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Deserialize;

use super::{Cell, ExperimentConfig, ExperimentError};
use crate::asymptotics::{self, AsymptoteReport};
use crate::bisector;
use crate::curvature::{self, ComparisonModel, CurvatureLabel, DistanceMatrix4};
use crate::error::GeoError;
use crate::geometry::{GeodesicLine, RaySpec};
use crate::models::{HilbertDomain, Model, SpaceHandle};
use crate::point::PointChart;
use crate::rng;
use crate::sampling::{Region, TripleSampler};
use crate::solver::{self, SearchSettings};

const STREAM_STRAIGHT: u64 = 0x7374_7261;
const STREAM_AXIOM: u64 = 0x6178_696f;
const STREAM_QUAD: u64 = 0x7175_6164;

type Summary = BTreeMap<String, Cell>;

pub(crate) struct RunOutput {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Summary,
    pub failures: usize,
    pub passed: bool,
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn point_cols(prefix: &str, dim: usize) -> Vec<String> {
    ["x", "y", "z"][..dim].iter().map(|c| format!("{prefix}{c}")).collect()
}

fn coords(p: &PointChart) -> impl Iterator<Item = Cell> + '_ {
    p.coords().iter().map(|c| Cell::num(*c))
}

fn settings(config: &ExperimentConfig) -> SearchSettings {
    SearchSettings {
        tol: config.tolerances.solver,
        seed: config.seed,
        ..Default::default()
    }
}

fn point(space: &SpaceHandle, c: &[f64], what: &str) -> Result<PointChart, ExperimentError> {
    space
        .point(c)
        .map_err(|e| ExperimentError::Config(format!("{what}: {e}")))
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Region used when a config names none.
pub(crate) fn default_region(space: &SpaceHandle) -> Region {
    match space.model() {
        Model::Euclidean { dim: 3 } => Region::Box {
            lo: vec![-1.0; 3],
            hi: vec![1.0; 3],
        },
        Model::Euclidean { .. } | Model::Minkowski(_) => Region::square(1.0),
        Model::Sphere => Region::SphereOctant,
        Model::PoincareDisk => Region::ball(0.8),
        Model::Hilbert(_) => Region::ball(0.5),
    }
}

fn is_ellipse(space: &SpaceHandle) -> bool {
    matches!(space.model(), Model::Hilbert(HilbertDomain::Ellipse { .. }))
}

fn d200() -> usize {
    200
}

fn d100() -> usize {
    100
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurvatureParams {
    #[serde(default = "d200")]
    n_triples: usize,
    #[serde(default)]
    region: Option<Region>,
    #[serde(default)]
    min_side: Option<f64>,
    #[serde(default)]
    min_angle: Option<f64>,
    #[serde(default)]
    expect: Option<CurvatureLabel>,
}

pub(crate) fn curvature(config: &ExperimentConfig, space: &SpaceHandle) -> Result<RunOutput, ExperimentError> {
    let p: CurvatureParams = config.params()?;
    let mut sampler = TripleSampler::new(p.region.unwrap_or_else(|| default_region(space)));
    sampler.min_side = p.min_side.unwrap_or(sampler.min_side);
    sampler.min_angle = p.min_angle.unwrap_or(sampler.min_angle);
    let tol = config.tolerances.verdict;
    let v = curvature::classify_curvature(space, &sampler, p.n_triples, tol, &settings(config))
        .map_err(ExperimentError::geo("curvature classification"))?;
    let dim = space.chart_dim();
    let mut columns = names(&["triple_id"]);
    for pre in ["a", "b", "c"] {
        columns.extend(point_cols(pre, dim));
    }
    columns.extend(names(&["margin", "verdict"]));
    let rows = v
        .samples
        .iter()
        .map(|s| {
            let mut row = vec![Cell::Int(s.index as i64)];
            for q in &s.triple {
                row.extend(coords(q));
            }
            row.push(Cell::num(s.margin));
            row.push(CurvatureLabel::from_margins(&[s.margin], tol).as_str().into());
            row
        })
        .collect();
    let expect = p.expect.or(match space.model() {
        Model::Euclidean { .. } | Model::Minkowski(_) => Some(CurvatureLabel::Zero),
        Model::PoincareDisk => Some(CurvatureLabel::Negative),
        Model::Sphere => Some(CurvatureLabel::Positive),
        Model::Hilbert(HilbertDomain::Ellipse { .. }) => Some(CurvatureLabel::Negative),
        Model::Hilbert(_) => None,
    });
    let mut summary = Summary::new();
    summary.insert("verdict".into(), v.label.as_str().into());
    summary.insert("min_margin".into(), v.min_margin.into());
    summary.insert("max_margin".into(), v.max_margin.into());
    summary.insert("n_triples".into(), v.n_triples.into());
    if let Some(e) = expect {
        summary.insert("expected".into(), e.as_str().into());
    }
    Ok(RunOutput {
        columns,
        rows,
        summary,
        failures: v.failures,
        passed: expect.is_none_or(|e| e == v.label),
    })
}

#[derive(Deserialize, Clone, Copy, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Shape {
    Flat,
    Curved,
}

fn default_focus_p() -> Vec<f64> {
    vec![0.0, 0.0]
}

fn default_focus_q() -> Vec<f64> {
    vec![0.5, 0.2]
}

fn d50() -> usize {
    50
}

fn flat_threshold() -> f64 {
    1e-5
}

fn witness_threshold() -> f64 {
    1e-3
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BisectorParams {
    #[serde(default = "default_focus_p")]
    focus_p: Vec<f64>,
    #[serde(default = "default_focus_q")]
    focus_q: Vec<f64>,
    #[serde(default = "d50")]
    n_pairs: usize,
    #[serde(default)]
    region: Option<Region>,
    #[serde(default = "flat_threshold")]
    threshold: f64,
    #[serde(default = "witness_threshold")]
    witness_threshold: f64,
    #[serde(default)]
    expect: Option<Shape>,
}

pub(crate) fn bisector(config: &ExperimentConfig, space: &SpaceHandle) -> Result<RunOutput, ExperimentError> {
    let p: BisectorParams = config.params()?;
    let fp = point(space, &p.focus_p, "focus_p")?;
    let fq = point(space, &p.focus_q, "focus_q")?;
    let region = p.region.unwrap_or_else(|| bisector::default_bisector_region(&fp, &fq));
    let r = bisector::flatness_test_in(space, &fp, &fq, &region, p.n_pairs, p.threshold, &settings(config))
        .map_err(ExperimentError::geo("bisector flatness"))?;
    let rows = r
        .pairs
        .iter()
        .zip(&r.defects)
        .enumerate()
        .map(|(i, ([a, b], d))| {
            let mut row = vec![Cell::int(i)];
            row.extend(coords(a));
            row.extend(coords(b));
            row.push(Cell::num(*d));
            row
        })
        .collect();
    let expect = p.expect.or(match space.model() {
        Model::Euclidean { .. } | Model::PoincareDisk => Some(Shape::Flat),
        _ if is_ellipse(space) => Some(Shape::Flat),
        _ => None,
    });
    let passed = match expect {
        Some(Shape::Flat) => r.worst_defect < p.threshold,
        Some(Shape::Curved) => r.worst_defect > p.witness_threshold,
        None => true,
    };
    let mut summary = Summary::new();
    summary.insert("worst_defect".into(), r.worst_defect.into());
    summary.insert("flat".into(), (r.worst_defect < p.threshold).into());
    summary.insert("n_pairs".into(), r.pairs.len().into());
    if let Some(e) = expect {
        summary.insert("expected".into(), if e == Shape::Flat { "flat" } else { "curved" }.into());
    }
    Ok(RunOutput {
        columns: names(&["pair_id", "x1", "y1", "x2", "y2", "defect"]),
        rows,
        summary,
        failures: 0,
        passed,
    })
}

#[derive(Deserialize, Clone, Copy, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Symmetry {
    Symmetric,
    Asymmetric,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PerpendicularityParams {
    #[serde(default = "d100")]
    n_configs: usize,
    #[serde(default = "flat_threshold")]
    threshold: f64,
    #[serde(default = "witness_threshold")]
    witness_threshold: f64,
    #[serde(default)]
    expect: Option<Symmetry>,
}

pub(crate) fn perpendicularity(config: &ExperimentConfig, space: &SpaceHandle) -> Result<RunOutput, ExperimentError> {
    let p: PerpendicularityParams = config.params()?;
    let r = bisector::perpendicularity_symmetry_probe(space, p.n_configs, &settings(config))
        .map_err(ExperimentError::geo("perpendicularity probe"))?;
    let rows = r
        .configs
        .iter()
        .map(|c| {
            let mut row = vec![Cell::int(c.index)];
            for q in [&c.a, &c.b, &c.c, &c.foot] {
                row.extend(coords(q));
            }
            row.push(Cell::num(c.residual));
            row
        })
        .collect();
    let expect = p.expect.or(match space.model() {
        Model::Euclidean { .. } | Model::PoincareDisk => Some(Symmetry::Symmetric),
        _ if is_ellipse(space) => Some(Symmetry::Symmetric),
        _ => None,
    });
    let passed = match expect {
        Some(Symmetry::Symmetric) => r.max_residual < p.threshold,
        Some(Symmetry::Asymmetric) => r.max_residual > p.witness_threshold,
        None => true,
    };
    let mut summary = Summary::new();
    summary.insert("max_residual".into(), r.max_residual.into());
    summary.insert("n_configs".into(), r.configs.len().into());
    if let Some(e) = expect {
        let s = if e == Symmetry::Symmetric { "symmetric" } else { "asymmetric" };
        summary.insert("expected".into(), s.into());
    }
    Ok(RunOutput {
        columns: names(&["config_id", "ax", "ay", "bx", "by", "cx", "cy", "foot_x", "foot_y", "residual"]),
        rows,
        summary,
        failures: 0,
        passed,
    })
}

fn half() -> f64 {
    0.5
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SphereConvexityParams {
    #[serde(default)]
    center: Option<Vec<f64>>,
    #[serde(default = "half")]
    radius: f64,
    #[serde(default = "d100")]
    n_pairs: usize,
}

pub(crate) fn sphere_convexity(config: &ExperimentConfig, space: &SpaceHandle) -> Result<RunOutput, ExperimentError> {
    let p: SphereConvexityParams = config.params()?;
    let default_center = match space.model() {
        Model::Sphere => vec![0.0, 0.0, 1.0],
        _ => vec![0.0; space.chart_dim()],
    };
    let center = point(space, &p.center.unwrap_or(default_center), "center")?;
    let r = bisector::sphere_convexity_probe(space, &center, p.radius, p.n_pairs, &settings(config))
        .map_err(ExperimentError::geo("sphere convexity"))?;
    let dim = space.chart_dim();
    let mut columns = names(&["pair_id"]);
    columns.extend(point_cols("p", dim));
    columns.extend(point_cols("q", dim));
    columns.push("overshoot".into());
    let rows = r
        .pairs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut row = vec![Cell::int(i)];
            row.extend(coords(&s.x1));
            row.extend(coords(&s.x2));
            row.push(Cell::num(s.overshoot));
            row
        })
        .collect();
    let mut summary = Summary::new();
    summary.insert("violations".into(), r.violations.into());
    summary.insert("worst_overshoot".into(), r.worst_overshoot.into());
    Ok(RunOutput {
        columns,
        rows,
        summary,
        failures: 0,
        passed: r.violations == 0,
    })
}

#[derive(Deserialize, Clone, Copy, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Straightness {
    Straight,
    Curved,
}

fn ray_direction() -> Vec<f64> {
    vec![1.0, 0.0]
}

fn d41() -> usize {
    41
}

fn straight_threshold() -> f64 {
    1e-4
}

fn curved_threshold() -> f64 {
    1e-2
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HorocycleParams {
    #[serde(default = "default_focus_p")]
    ray_base: Vec<f64>,
    #[serde(default = "ray_direction")]
    ray_direction: Vec<f64>,
    #[serde(default)]
    anchor: Option<Vec<f64>>,
    #[serde(default = "d41")]
    n_samples: usize,
    /// Circle centers `ray(t)` for the circle-to-horocycle sequence.
    #[serde(default)]
    circle_t: Option<Vec<f64>>,
    #[serde(default = "straight_threshold")]
    straight_threshold: f64,
    #[serde(default = "curved_threshold")]
    curved_threshold: f64,
    #[serde(default = "curved_threshold")]
    circle_threshold: f64,
    #[serde(default)]
    expect: Option<Straightness>,
}

pub(crate) fn horocycle(config: &ExperimentConfig, space: &SpaceHandle) -> Result<RunOutput, ExperimentError> {
    let p: HorocycleParams = config.params()?;
    let base = point(space, &p.ray_base, "ray_base")?;
    let anchor = match &p.anchor {
        Some(a) => point(space, a, "anchor")?,
        None => base,
    };
    let ray = RaySpec::new(space, base, &p.ray_direction).map_err(ExperimentError::geo("ray"))?;
    let tol = config.tolerances.busemann;
    let cloud = asymptotics::limit_sphere_sample(&ray, &anchor, p.n_samples, tol, config.seed)
        .map_err(ExperimentError::geo("horocycle sampling"))?;
    let pts = cloud.points();
    let dev = asymptotics::line_fit_deviations(&pts).map_err(ExperimentError::geo("line fit"))?;
    let fit = (dev.iter().map(|d| d * d).sum::<f64>() / dev.len() as f64).sqrt();
    let rows = pts
        .iter()
        .zip(&cloud.values)
        .zip(&dev)
        .enumerate()
        .map(|(i, ((q, v), d))| vec![Cell::int(i), Cell::num(q[0]), Cell::num(q[1]), Cell::num(*v), Cell::num(d.abs())])
        .collect();
    let mut summary = Summary::new();
    summary.insert("line_fit_residual".into(), fit.into());
    summary.insert("t_fixed".into(), cloud.t_fixed.into());
    summary.insert("anchor_value".into(), cloud.anchor_value.into());
    if let Ok(c) = asymptotics::fit_circle(&pts) {
        summary.insert("circle_center_x".into(), c.center[0].into());
        summary.insert("circle_center_y".into(), c.center[1].into());
        summary.insert("circle_radius".into(), c.radius.into());
        summary.insert("circle_rms".into(), c.rms.into());
    }
    let expect = p.expect.or(match space.model() {
        Model::Euclidean { .. } | Model::Minkowski(_) => Some(Straightness::Straight),
        Model::PoincareDisk => Some(Straightness::Curved),
        _ if is_ellipse(space) => Some(Straightness::Curved),
        _ => None,
    });
    let mut passed = match expect {
        Some(Straightness::Straight) => fit < p.straight_threshold,
        Some(Straightness::Curved) => fit > p.curved_threshold,
        None => true,
    };
    if let Some(e) = expect {
        let s = if e == Straightness::Straight { "straight" } else { "curved" };
        summary.insert("expected".into(), s.into());
    }
    if let Some(ts) = &p.circle_t {
        let gaps = asymptotics::circle_to_horocycle_convergence(&ray, &anchor, ts, tol, config.seed)
            .map_err(ExperimentError::geo("circle convergence"))?;
        for (k, (t, g)) in ts.iter().zip(&gaps).enumerate() {
            summary.insert(format!("circle_gap_{k:02}"), (*g).into());
            summary.insert(format!("circle_t_{k:02}"), (*t).into());
        }
        let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
        let last = gaps.last().copied().unwrap_or(f64::INFINITY);
        summary.insert("circle_gaps_decreasing".into(), decreasing.into());
        passed &= decreasing && last < p.circle_threshold;
    }
    Ok(RunOutput {
        columns: names(&["sample_id", "x", "y", "busemann_value", "fit_residual"]),
        rows,
        summary,
        failures: 0,
        passed,
    })
}

fn default_parallel_point() -> Vec<f64> {
    vec![0.0, 0.5]
}

fn default_t_sequence() -> Vec<f64> {
    (1..=24).map(|k| 2f64.powi(k)).collect()
}

fn parallel_threshold() -> f64 {
    1e-6
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParallelsParams {
    #[serde(default = "default_parallel_point")]
    point: Vec<f64>,
    #[serde(default = "default_focus_p")]
    line_base: Vec<f64>,
    #[serde(default = "ray_direction")]
    line_direction: Vec<f64>,
    /// Positive parameters; the backward run uses their negatives.
    #[serde(default = "default_t_sequence")]
    t_sequence: Vec<f64>,
    #[serde(default = "parallel_threshold")]
    parallel_threshold: f64,
    #[serde(default)]
    expect_endpoint: Option<[f64; 2]>,
}

pub(crate) fn parallels(config: &ExperimentConfig, space: &SpaceHandle) -> Result<RunOutput, ExperimentError> {
    let p: ParallelsParams = config.params()?;
    let pt = point(space, &p.point, "point")?;
    let base = point(space, &p.line_base, "line_base")?;
    let line = GeodesicLine::new(space, base, &p.line_direction).map_err(ExperimentError::geo("line"))?;
    let set = settings(config);
    let mut rows = Vec::new();
    let mut summary = Summary::new();
    let mut passed = true;
    let mut limits: Vec<AsymptoteReport> = Vec::new();
    for (side, sign) in [("forward", 1.0), ("backward", -1.0)] {
        let ts: Vec<f64> = p.t_sequence.iter().map(|t| sign * t).collect();
        match asymptotics::asymptote_limit(space, &pt, &line, &ts, &set) {
            Ok(a) => {
                for (k, t) in a.t_values.iter().enumerate() {
                    let div = if k == 0 { Cell::text("") } else { Cell::num(a.divergences[k - 1]) };
                    rows.push(vec![side.into(), Cell::int(k), Cell::num(*t), div]);
                }
                summary.insert(format!("{side}_converged"), true.into());
                summary.insert(format!("{side}_direction_x"), a.final_direction[0].into());
                summary.insert(format!("{side}_direction_y"), a.final_direction[1].into());
                summary.insert(format!("{side}_divergence"), a.divergences.last().copied().unwrap_or(f64::NAN).into());
                if let Some(e) = a.ideal_endpoint {
                    summary.insert(format!("{side}_endpoint_x"), e[0].into());
                    summary.insert(format!("{side}_endpoint_y"), e[1].into());
                }
                limits.push(a);
            }
            Err(GeoError::NoConvergence { residual, .. }) => {
                summary.insert(format!("{side}_converged"), false.into());
                summary.insert(format!("{side}_divergence"), residual.into());
                passed = false;
            }
            Err(e) => return Err(ExperimentError::geo(format!("{side} asymptote"))(e)),
        }
    }
    if let [f, b] = &limits[..] {
        match (f.ideal_endpoint, b.ideal_endpoint) {
            (Some(ef), Some(eb)) => {
                let gap = (ef[0] - eb[0]).hypot(ef[1] - eb[1]);
                summary.insert("endpoint_gap".into(), gap.into());
                passed &= gap > 1e-3;
                if let Some(want) = p.expect_endpoint {
                    let miss = (ef[0] - want[0]).hypot(ef[1] - want[1]);
                    summary.insert("endpoint_miss".into(), miss.into());
                    passed &= miss < 1e-3;
                }
            }
            _ => {
                // chart distance of both limits from the parallel through the point
                let (pv, dv) = (pt.coords(), &p.line_direction);
                let dn = dv[0].hypot(dv[1]);
                let gap = worst(f.limit_samples.iter().chain(&b.limit_samples).map(|s| {
                    ((s[0] - pv[0]) * dv[1] - (s[1] - pv[1]) * dv[0]).abs() / dn
                }));
                summary.insert("parallel_gap".into(), gap.into());
                passed &= gap < p.parallel_threshold;
            }
        }
    }
    Ok(RunOutput {
        columns: names(&["side", "step", "t", "divergence"]),
        rows,
        summary,
        failures: 0,
        passed,
    })
}

fn straight_tol() -> f64 {
    1e-10
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StraightnessParams {
    #[serde(default = "d200")]
    n_triples: usize,
    #[serde(default)]
    region: Option<Region>,
    #[serde(default = "straight_tol")]
    threshold: f64,
    #[serde(default)]
    expect: Option<Straightness>,
}

fn collinear_triple(space: &SpaceHandle, region: &Region, seed: u64, k: usize) -> crate::Result<[PointChart; 3]> {
    let mut r = rng::stream(seed, STREAM_STRAIGHT, k as u64);
    if matches!(space.model(), Model::Sphere) {
        // three points in order along a random great circle
        let g: [f64; 3] = std::array::from_fn(|_| r.sample(StandardNormal));
        let n = PointChart::sphere_normalized(g)?;
        let n = n.coords();
        let seed_axis = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let dot = seed_axis[0] * n[0] + seed_axis[1] * n[1] + seed_axis[2] * n[2];
        let e1 = PointChart::sphere_normalized(std::array::from_fn(|i| seed_axis[i] - dot * n[i]))?;
        let e1 = e1.coords();
        let e2 = [n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]];
        let mut th = [r.random_range(0.0..2.5), r.random_range(0.0..2.5), r.random_range(0.0..2.5)];
        th.sort_by(f64::total_cmp);
        th[1] = th[1].clamp(th[0] + 0.05, th[0] + 1.25);
        th[2] = th[2].max(th[1] + 0.05);
        let at = |t: f64| PointChart::sphere_normalized(std::array::from_fn(|i| t.cos() * e1[i] + t.sin() * e2[i]));
        return Ok([at(th[0])?, at(th[1])?, at(th[2])?]);
    }
    for _ in 0..1000 {
        let x = region.sample(space, &mut r)?;
        let z = region.sample(space, &mut r)?;
        let t: f64 = r.random_range(0.2..0.8);
        if x.chart_distance(&z) < 0.1 {
            continue;
        }
        let y: Vec<f64> = x.coords().iter().zip(z.coords()).map(|(a, b)| a + t * (b - a)).collect();
        return Ok([x, space.point(&y)?, z]);
    }
    Err(GeoError::InsufficientSamples("no well-separated pair in region".into()))
}

pub(crate) fn straightness(config: &ExperimentConfig, space: &SpaceHandle) -> Result<RunOutput, ExperimentError> {
    let p: StraightnessParams = config.params()?;
    let region = p.region.unwrap_or_else(|| default_region(space));
    if !matches!(space.model(), Model::Sphere) {
        region.validate(space).map_err(|e| ExperimentError::Config(e.to_string()))?;
    }
    let results: Vec<crate::Result<([PointChart; 3], f64)>> = (0..p.n_triples)
        .into_par_iter()
        .map(|k| {
            let t = collinear_triple(space, &region, config.seed, k)?;
            let r = asymptotics::additivity_straightness_residual(space, &t[0], &t[1], &t[2])?;
            Ok((t, r))
        })
        .collect();
    let failures = results.iter().filter(|r| r.is_err()).count();
    let dim = space.chart_dim();
    let mut columns = names(&["triple_id"]);
    for pre in ["p", "q", "r"] {
        columns.extend(point_cols(pre, dim));
    }
    columns.push("residual".into());
    let mut rows = Vec::new();
    let mut max_res: f64 = 0.0;
    for (k, res) in results.iter().enumerate() {
        if let Ok((t, r)) = res {
            let mut row = vec![Cell::int(k)];
            for q in t {
                row.extend(coords(q));
            }
            row.push(Cell::num(*r));
            rows.push(row);
            max_res = max_res.max(r.abs());
        }
    }
    let expect = p.expect.unwrap_or(if space.chart_lines_are_geodesics() || matches!(space.model(), Model::Sphere) {
        Straightness::Straight
    } else {
        Straightness::Curved
    });
    let mut summary = Summary::new();
    summary.insert("max_abs_residual".into(), max_res.into());
    summary.insert(
        "expected".into(),
        if expect == Straightness::Straight { "straight" } else { "curved" }.into(),
    );
    let passed = failures * 10 <= p.n_triples
        && match expect {
            Straightness::Straight => max_res < p.threshold,
            Straightness::Curved => max_res > p.threshold,
        };
    Ok(RunOutput {
        columns,
        rows,
        summary,
        failures,
        passed,
    })
}

fn tenth() -> f64 {
    0.1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomParams {
    #[serde(default = "d100")]
    n_instances: usize,
    #[serde(default = "tenth")]
    delta: f64,
    #[serde(default)]
    region: Option<Region>,
}

const NEAR_ANTIPODAL: &str = "near-antipodal";

fn axiom_region(space: &SpaceHandle) -> Region {
    match space.model() {
        Model::Sphere => Region::SphereCap {
            pole: [0.0, 0.0, 1.0],
            angle: PI,
        },
        _ => default_region(space),
    }
}

fn axiom_rows(space: &SpaceHandle, region: &Region, delta: f64, set: &SearchSettings, k: usize) -> Vec<Vec<Cell>> {
    let mut r = rng::stream(set.seed, STREAM_AXIOM, k as u64);
    let s = SearchSettings {
        seed: rng::derive_seed(set.seed, STREAM_AXIOM, k as u64),
        ..*set
    };
    let row = |axiom: &str, res: crate::Result<solver::AxiomProbeReport>| match res {
        Ok(rep) => {
            let flag = if rep.flag.is_some() { NEAR_ANTIPODAL } else { "" };
            vec![Cell::int(k), axiom.into(), Cell::num(rep.residual), rep.passed.into(), flag.into()]
        }
        Err(e) => vec![Cell::int(k), axiom.into(), Cell::num(f64::NAN), false.into(), format!("error: {e}").into()],
    };
    let pair = (0..1000).find_map(|_| {
        let x = region.sample(space, &mut r).ok()?;
        let y = region.sample(space, &mut r).ok()?;
        let d = space.distance(&x, &y).ok()?;
        (d >= 0.05).then_some((x, y, d))
    });
    let Some((x, y, d)) = pair else {
        let e = || Err(GeoError::InsufficientSamples("no separated pair".into()));
        return vec![row("betweenness", e()), row("extendability", e()), row("unique-extension", e())];
    };
    let step = delta.min(0.5 * d);
    let between = if matches!(space.model(), Model::Sphere) && d > PI - crate::geometry::SPHERE_CAP {
        vec![Cell::int(k), "betweenness".into(), Cell::num(f64::NAN), false.into(), NEAR_ANTIPODAL.into()]
    } else {
        row("betweenness", solver::betweenness_witness(space, &x, &y, &s))
    };
    vec![
        between,
        row("extendability", solver::extendability_probe(space, &x, &y, step, &s)),
        row("unique-extension", solver::extension_uniqueness_probe(space, &x, &y, step, &s)),
    ]
}

pub(crate) fn axioms(config: &ExperimentConfig, space: &SpaceHandle) -> Result<RunOutput, ExperimentError> {
    let p: AxiomParams = config.params()?;
    let region = p.region.unwrap_or_else(|| axiom_region(space));
    region.validate(space).map_err(|e| ExperimentError::Config(e.to_string()))?;
    let set = settings(config);
    let rows: Vec<Vec<Cell>> = (0..p.n_instances)
        .into_par_iter()
        .flat_map_iter(|k| axiom_rows(space, &region, p.delta, &set, k))
        .collect();
    let flagged = |r: &Vec<Cell>| r[4].as_str() == Some(NEAR_ANTIPODAL);
    let mut summary = Summary::new();
    for axiom in ["betweenness", "extendability", "unique-extension"] {
        let sel: Vec<&Vec<Cell>> = rows.iter().filter(|r| r[1].as_str() == Some(axiom) && !flagged(r)).collect();
        let max = worst(sel.iter().map(|r| r[2].as_f64().unwrap_or(f64::NAN)).map(|v| if v.is_nan() { f64::INFINITY } else { v }));
        summary.insert(format!("{axiom}_max_residual"), max.into());
        summary.insert(format!("{axiom}_passed"), sel.iter().filter(|r| r[3].as_bool() == Some(true)).count().into());
    }
    summary.insert("flagged".into(), rows.iter().filter(|r| flagged(r)).count().into());
    let passed = rows.iter().filter(|r| !flagged(r)).all(|r| r[3].as_bool() == Some(true));
    Ok(RunOutput {
        columns: names(&["instance_id", "axiom", "residual", "passed", "flag"]),
        rows,
        summary,
        failures: 0,
        passed,
    })
}

fn d1000() -> usize {
    1000
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadrupleParams {
    #[serde(default = "d1000")]
    n_quads: usize,
    #[serde(default)]
    model: Option<ComparisonModel>,
    #[serde(default = "one")]
    scale: f64,
    #[serde(default)]
    region: Option<Region>,
    /// Explicit upper triangles `(d12, d13, d14, d23, d24, d34)`; replaces sampling.
    #[serde(default)]
    matrices: Option<Vec<[f64; 6]>>,
    #[serde(default)]
    expect: Option<bool>,
}

pub(crate) fn quadruple(config: &ExperimentConfig, space: &SpaceHandle) -> Result<RunOutput, ExperimentError> {
    let p: QuadrupleParams = config.params()?;
    let native = match space.model() {
        Model::Euclidean { .. } => Some(ComparisonModel::Euclidean),
        Model::Sphere => Some(ComparisonModel::Spherical),
        Model::PoincareDisk => Some(ComparisonModel::Hyperbolic),
        _ => None,
    };
    let model = p
        .model
        .or(native)
        .ok_or_else(|| ExperimentError::Config(format!("quadruple needs a comparison model for {}", space.name())))?;
    let region = p.region.unwrap_or_else(|| default_region(space));
    let inputs: Vec<Result<[f64; 6], String>> = match &p.matrices {
        Some(m) => m.iter().map(|u| Ok(*u)).collect(),
        None => {
            region.validate(space).map_err(|e| ExperimentError::Config(e.to_string()))?;
            (0..p.n_quads)
                .into_par_iter()
                .map(|k| {
                    let mut r = rng::stream(config.seed, STREAM_QUAD, k as u64);
                    let pts: Vec<PointChart> = (0..4)
                        .map(|_| region.sample(space, &mut r))
                        .collect::<crate::Result<_>>()
                        .map_err(|e| e.to_string())?;
                    let dm = DistanceMatrix4::from_points(space, &[pts[0], pts[1], pts[2], pts[3]]).map_err(|e| e.to_string())?;
                    Ok(dm.upper())
                })
                .collect()
        }
    };
    let failures = inputs.iter().filter(|i| i.is_err()).count();
    let rows: Vec<Vec<Cell>> = inputs
        .iter()
        .enumerate()
        .filter_map(|(k, u)| u.as_ref().ok().map(|u| (k, u)))
        .map(|(k, u)| {
            let mut row = vec![Cell::int(k)];
            row.extend(u.iter().map(|d| Cell::num(*d)));
            let verdict = DistanceMatrix4::from_upper(*u).and_then(|dm| curvature::quadruple_embeddability(&dm, model, p.scale));
            match verdict {
                Ok(e) => {
                    row.push(e.embeddable.into());
                    row.push(e.dimension.map(Cell::int).unwrap_or_else(|| Cell::text("")));
                    row.push(Cell::text(""));
                }
                Err(e) => {
                    row.push(false.into());
                    row.push(Cell::text(""));
                    row.push(Cell::text(e.to_string()));
                }
            }
            row
        })
        .collect();
    let accepted = rows.iter().filter(|r| r[7].as_bool() == Some(true)).count();
    let expect = p.expect.or((p.matrices.is_none() && Some(model) == native).then_some(true));
    let passed = match expect {
        Some(true) => accepted == rows.len(),
        Some(false) => accepted == 0,
        None => true,
    };
    let mut summary = Summary::new();
    summary.insert("accepted".into(), accepted.into());
    summary.insert("rejected".into(), (rows.len() - accepted).into());
    Ok(RunOutput {
        columns: names(&["quad_id", "d12", "d13", "d14", "d23", "d24", "d34", "embeddable", "dimension", "note"]),
        rows,
        summary,
        failures,
        passed,
    })
}
