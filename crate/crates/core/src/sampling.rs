//! Seeded region samplers in chart coordinates.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::geometry::Triangle;
use crate::linalg::{self, V3};
use crate::models::{Model, SpaceHandle};
use crate::point::PointChart;
use crate::rng::{self, SampleRng};

const STREAM_TRIPLE: u64 = 0x7472_6970;
const MAX_TRIES: usize = 10_000;

/// Sampling region in chart coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Region {
    /// Axis-aligned box.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Euclidean chart ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// The positive octant of the sphere.
    SphereOctant,
    /// Spherical cap of angular radius `angle` around `pole`.
    SphereCap { pole: [f64; 3], angle: f64 },
}

impl Region {
    pub fn square(half: f64) -> Self {
        Region::Box {
            lo: vec![-half, -half],
            hi: vec![half, half],
        }
    }

    pub fn ball(radius: f64) -> Self {
        Region::Ball {
            center: vec![0.0, 0.0],
            radius,
        }
    }

    pub fn validate(&self, space: &SpaceHandle) -> Result<()> {
        let sphere = matches!(space.model(), Model::Sphere);
        let dim = space.chart_dim();
        let bad = |why: String| Err(GeoError::DegenerateInput(format!("region: {why}")));
        match self {
            Region::Box { lo, hi } => {
                if sphere {
                    return bad("boxes are not available on the sphere".into());
                }
                if lo.len() != dim || hi.len() != dim {
                    return bad(format!("box needs {dim} coordinates"));
                }
                if lo.iter().zip(hi).any(|(l, h)| !(l < h) || !l.is_finite() || !h.is_finite()) {
                    return bad("box needs lo < hi in every coordinate".into());
                }
            }
            Region::Ball { center, radius } => {
                if sphere {
                    return bad("chart balls are not available on the sphere".into());
                }
                if center.len() != dim || !(*radius > 0.0 && radius.is_finite()) {
                    return bad(format!("ball needs {dim} center coordinates and radius > 0"));
                }
            }
            Region::SphereOctant => {
                if !sphere {
                    return bad("octant requires the sphere".into());
                }
            }
            Region::SphereCap { pole, angle } => {
                if !sphere || linalg::normalize(*pole).is_none() || !(*angle > 0.0) {
                    return bad("cap requires the sphere, a nonzero pole and angle > 0".into());
                }
            }
        }
        Ok(())
    }

    fn contains(&self, v: V3) -> bool {
        match self {
            Region::Box { lo, hi } => lo.iter().zip(hi).enumerate().all(|(i, (l, h))| *l <= v[i] && v[i] <= *h),
            Region::Ball { center, radius } => {
                let mut c = [0.0; 3];
                c[..center.len()].copy_from_slice(center);
                linalg::dist(c, v) <= *radius
            }
            Region::SphereOctant => v.iter().all(|x| *x >= 0.0),
            Region::SphereCap { pole, angle } => {
                let p = linalg::normalize(*pole).unwrap_or([0.0, 0.0, 1.0]);
                linalg::angle_between(p, v) <= *angle
            }
        }
    }

    fn draw(&self, dim: usize, rng: &mut SampleRng) -> V3 {
        match self {
            Region::Box { lo, hi } => {
                let mut v = [0.0; 3];
                for i in 0..dim {
                    v[i] = rng.random_range(lo[i]..hi[i]);
                }
                v
            }
            Region::Ball { center, radius } => {
                let mut v = [0.0; 3];
                for i in 0..dim {
                    v[i] = center[i] + rng.random_range(-*radius..*radius);
                }
                v
            }
            Region::SphereOctant => {
                let g: [f64; 3] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal).abs());
                linalg::normalize(g).unwrap_or([1.0, 0.0, 0.0])
            }
            Region::SphereCap { .. } => {
                let g: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
                linalg::normalize(g).unwrap_or([1.0, 0.0, 0.0])
            }
        }
    }

    /// Uniform chart sample from the region that is admissible for `space`.
    pub fn sample(&self, space: &SpaceHandle, rng: &mut SampleRng) -> Result<PointChart> {
        let dim = space.chart_dim();
        for _ in 0..MAX_TRIES {
            let v = self.draw(dim, rng);
            if !self.contains(v) {
                continue;
            }
            if let Ok(p) = space.point_v(v) {
                return Ok(p);
            }
        }
        Err(GeoError::InsufficientSamples(format!(
            "region {self:?} yields no admissible point of {}",
            space.name()
        )))
    }
}

/// Seeded sampler of well-conditioned triangles inside a region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleSampler {
    pub region: Region,
    /// Smallest admissible side length (metric).
    #[serde(default = "default_min_side")]
    pub min_side: f64,
    /// Smallest admissible interior angle.
    #[serde(default = "default_min_angle")]
    pub min_angle: f64,
}

fn default_min_side() -> f64 {
    0.2
}

fn default_min_angle() -> f64 {
    0.2
}

impl TripleSampler {
    pub fn new(region: Region) -> Self {
        TripleSampler {
            region,
            min_side: default_min_side(),
            min_angle: default_min_angle(),
        }
    }

    pub fn with_floors(mut self, min_side: f64, min_angle: f64) -> Self {
        self.min_side = min_side;
        self.min_angle = min_angle;
        self
    }

    /// Triangle number `index` of the stream keyed by `seed`.
    pub fn triangle(&self, space: &SpaceHandle, seed: u64, index: u64) -> Result<Triangle> {
        self.region.validate(space)?;
        let mut rng = rng::stream(seed, STREAM_TRIPLE, index);
        for _ in 0..MAX_TRIES {
            let a = self.region.sample(space, &mut rng)?;
            let b = self.region.sample(space, &mut rng)?;
            let c = self.region.sample(space, &mut rng)?;
            let Ok(t) = space.triangle_measure(&a, &b, &c) else {
                continue;
            };
            let side_ok = t.sides().iter().all(|s| *s >= self.min_side);
            let angle_ok = t.angles().iter().all(|x| *x >= self.min_angle);
            if side_ok && angle_ok {
                return Ok(t);
            }
        }
        Err(GeoError::InsufficientSamples(format!(
            "no admissible triangle in {:?} after {MAX_TRIES} draws",
            self.region
        )))
    }

    pub fn triple(&self, space: &SpaceHandle, seed: u64, index: u64) -> Result<[PointChart; 3]> {
        Ok(self.triangle(space, seed, index)?.vertices())
    }
}
