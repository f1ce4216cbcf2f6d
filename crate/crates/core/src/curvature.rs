//! Curvature sign by midpoint comparison, the cosine inequality, angle
//! excess, quadruple embeddability and the angular-bisector ratio.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix4, Matrix5, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::geometry::{Triangle, DEGENERACY_FLOOR, SPHERE_CAP};
use crate::linalg::{self, V3};
use crate::models::{disk, Model, SpaceHandle};
use crate::numeric;
use crate::point::PointChart;
use crate::sampling::TripleSampler;
use crate::solver::{midpoint_search, SearchSettings};

/// Band separating "zero" margins from signed ones.
pub const VERDICT_TOL: f64 = 1e-7;

/// `d(a', b') - d(a, b) / 2` with `a'`, `b'` the midpoints of `a c` and `b c`.
pub fn curvature_margin(space: &SpaceHandle, a: &PointChart, b: &PointChart, c: &PointChart, settings: &SearchSettings) -> Result<f64> {
    for (p, q) in [(a, b), (a, c), (b, c)] {
        let d = space.distance(p, q)?;
        if d < DEGENERACY_FLOOR {
            return Err(GeoError::DegenerateInput(format!("points {d:e} apart")));
        }
        if matches!(space.model(), Model::Sphere) && d > PI - SPHERE_CAP {
            return Err(GeoError::AmbiguousGeodesic(format!("sphere points {d:.6} apart")));
        }
    }
    let a_mid = midpoint_search(space, a, c, settings)?;
    let b_mid = midpoint_search(space, b, c, settings)?;
    Ok(space.distance(&a_mid, &b_mid)? - 0.5 * space.distance(a, b)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureLabel {
    Negative,
    Nonpositive,
    Zero,
    Nonnegative,
    Positive,
    Indeterminate,
}

impl CurvatureLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurvatureLabel::Negative => "negative",
            CurvatureLabel::Nonpositive => "nonpositive",
            CurvatureLabel::Zero => "zero",
            CurvatureLabel::Nonnegative => "nonnegative",
            CurvatureLabel::Positive => "positive",
            CurvatureLabel::Indeterminate => "indeterminate",
        }
    }

    /// Label of a set of margins under the band `tol`. "zero" wins over the
    /// non-strict labels it implies.
    pub fn from_margins(margins: &[f64], tol: f64) -> Self {
        let all = |f: &dyn Fn(f64) -> bool| margins.iter().all(|m| f(*m));
        if all(&|m| m.abs() <= tol) {
            CurvatureLabel::Zero
        } else if all(&|m| m < -tol) {
            CurvatureLabel::Negative
        } else if all(&|m| m > tol) {
            CurvatureLabel::Positive
        } else if all(&|m| m <= tol) {
            CurvatureLabel::Nonpositive
        } else if all(&|m| m >= -tol) {
            CurvatureLabel::Nonnegative
        } else {
            CurvatureLabel::Indeterminate
        }
    }
}

impl std::fmt::Display for CurvatureLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginSample {
    pub index: u64,
    pub triple: [PointChart; 3],
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureVerdict {
    pub label: CurvatureLabel,
    pub n_triples: usize,
    pub min_margin: f64,
    pub max_margin: f64,
    pub worst_triple: [PointChart; 3],
    pub tol: f64,
    pub failures: usize,
    pub samples: Vec<MarginSample>,
}

/// Labels the curvature sign of `space` from `n_triples` seeded triples.
pub fn classify_curvature(
    space: &SpaceHandle,
    sampler: &TripleSampler,
    n_triples: usize,
    tol: f64,
    settings: &SearchSettings,
) -> Result<CurvatureVerdict> {
    if n_triples < 30 {
        return Err(GeoError::InsufficientSamples(format!(
            "{n_triples} triples requested, at least 30 needed"
        )));
    }
    settings.validate()?;
    sampler.region.validate(space)?;
    let results: Vec<Result<MarginSample>> = (0..n_triples as u64)
        .into_par_iter()
        .map(|i| {
            let triple = sampler.triple(space, settings.seed, i)?;
            let [a, b, c] = &triple;
            let margin = curvature_margin(space, a, b, c, settings)?;
            Ok(MarginSample { index: i, triple, margin })
        })
        .collect();
    let failures = results.iter().filter(|r| r.is_err()).count();
    if failures * 10 > n_triples {
        return Err(GeoError::InsufficientSamples(format!(
            "{failures} of {n_triples} triples failed"
        )));
    }
    let samples: Vec<MarginSample> = results.into_iter().filter_map(|r| r.ok()).collect();
    let margins: Vec<f64> = samples.iter().map(|s| s.margin).collect();
    let label = CurvatureLabel::from_margins(&margins, tol);
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let max_margin = margins.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // the sample that comes closest to breaking the label
    let key = |m: f64| match label {
        CurvatureLabel::Negative | CurvatureLabel::Nonpositive => m,
        CurvatureLabel::Positive | CurvatureLabel::Nonnegative => -m,
        _ => m.abs(),
    };
    let worst = samples
        .iter()
        .max_by(|x, y| key(x.margin).total_cmp(&key(y.margin)).then(y.index.cmp(&x.index)))
        .map(|s| s.triple)
        .ok_or_else(|| GeoError::InsufficientSamples("no triples".into()))?;
    Ok(CurvatureVerdict {
        label,
        n_triples: samples.len(),
        min_margin,
        max_margin,
        worst_triple: worst,
        tol,
        failures,
        samples,
    })
}

/// `gamma^2 - (alpha^2 + beta^2 - 2 alpha beta cos C)`.
pub fn cosine_inequality_residual(t: &Triangle) -> f64 {
    t.gamma * t.gamma - (t.alpha * t.alpha + t.beta * t.beta - 2.0 * t.alpha * t.beta * t.angle_c.cos())
}

/// `A + B + C - pi`.
pub fn angle_excess(t: &Triangle) -> f64 {
    t.angle_a + t.angle_b + t.angle_c - PI
}

/// Symmetric 4x4 distance matrix with zero diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 6]", into = "[f64; 6]")]
pub struct DistanceMatrix4 {
    d: [[f64; 4]; 4],
}

impl TryFrom<[f64; 6]> for DistanceMatrix4 {
    type Error = GeoError;

    fn try_from(u: [f64; 6]) -> Result<Self> {
        DistanceMatrix4::from_upper(u)
    }
}

impl From<DistanceMatrix4> for [f64; 6] {
    fn from(m: DistanceMatrix4) -> Self {
        m.upper()
    }
}

impl DistanceMatrix4 {
    pub fn new(d: [[f64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            if d[i][i] != 0.0 {
                return Err(GeoError::InvalidMatrix(format!("diagonal entry {i} is {}", d[i][i])));
            }
            for j in 0..4 {
                if !d[i][j].is_finite() || d[i][j] < 0.0 {
                    return Err(GeoError::InvalidMatrix(format!("entry ({i},{j}) = {}", d[i][j])));
                }
                if d[i][j] != d[j][i] {
                    return Err(GeoError::InvalidMatrix(format!("entry ({i},{j}) is not symmetric")));
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    if d[i][j] > d[i][k] + d[k][j] + 1e-9 {
                        return Err(GeoError::InvalidMatrix(format!(
                            "triangle inequality fails: d{}{} = {} > d{}{} + d{}{}",
                            i + 1,
                            j + 1,
                            d[i][j],
                            i + 1,
                            k + 1,
                            k + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(DistanceMatrix4 { d })
    }

    /// From the upper triangle `(d12, d13, d14, d23, d24, d34)`.
    pub fn from_upper(u: [f64; 6]) -> Result<Self> {
        let [d12, d13, d14, d23, d24, d34] = u;
        DistanceMatrix4::new([
            [0.0, d12, d13, d14],
            [d12, 0.0, d23, d24],
            [d13, d23, 0.0, d34],
            [d14, d24, d34, 0.0],
        ])
    }

    /// Pairwise distances of four points of `space`.
    pub fn from_points(space: &SpaceHandle, p: &[PointChart; 4]) -> Result<Self> {
        let mut d = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                d[i][j] = space.distance(&p[i], &p[j])?;
                d[j][i] = d[i][j];
            }
        }
        DistanceMatrix4::new(d)
    }

    pub fn upper(&self) -> [f64; 6] {
        let d = &self.d;
        [d[0][1], d[0][2], d[0][3], d[1][2], d[1][3], d[2][3]]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    pub fn max_entry(&self) -> f64 {
        self.upper().into_iter().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonModel {
    Euclidean,
    Spherical,
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embeddability {
    pub embeddable: bool,
    /// Dimension of the smallest model space holding the quadruple.
    pub dimension: Option<usize>,
    /// Eigenvalues of the decisive Gram-type matrix, ascending.
    pub eigenvalues: Vec<f64>,
    /// Cayley-Menger determinants of the four triples and of the quadruple
    /// (Euclidean only).
    pub cayley_menger: Vec<f64>,
}

fn cayley_menger_3(d: [f64; 3]) -> f64 {
    let [a, b, c] = d.map(|x| x * x);
    Matrix4::new(
        0.0, 1.0, 1.0, 1.0, //
        1.0, 0.0, a, b, //
        1.0, a, 0.0, c, //
        1.0, b, c, 0.0,
    )
    .determinant()
}

fn eig_ascending(v: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut e: Vec<f64> = v.into_iter().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Whether the quadruple is isometric to four points of the Euclidean
/// space, the sphere of radius `curvature_scale`, or the hyperbolic space
/// of curvature `-1 / curvature_scale^2`.
pub fn quadruple_embeddability(dm: &DistanceMatrix4, model: ComparisonModel, curvature_scale: f64) -> Result<Embeddability> {
    if !(curvature_scale > 0.0 && curvature_scale.is_finite()) {
        return Err(GeoError::InvalidMatrix(format!("curvature scale {curvature_scale} must be > 0")));
    }
    let s = curvature_scale;
    match model {
        ComparisonModel::Euclidean => {
            // Gram matrix relative to point 1
            let g = Matrix3::from_fn(|i, j| {
                let (a, b, c) = (dm.get(0, i + 1), dm.get(0, j + 1), dm.get(i + 1, j + 1));
                0.5 * (a * a + b * b - c * c)
            });
            let eig = eig_ascending(SymmetricEigen::new(g).eigenvalues.iter().copied());
            let floor = 1e-9 * dm.max_entry().powi(2).max(1.0);
            let embeddable = eig[0] >= -floor;
            let dimension = embeddable.then(|| eig.iter().filter(|e| **e > floor).count());
            let triples = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
            let mut cm: Vec<f64> = triples
                .iter()
                .map(|[i, j, k]| cayley_menger_3([dm.get(*i, *j), dm.get(*i, *k), dm.get(*j, *k)]))
                .collect();
            let sq = |i: usize, j: usize| dm.get(i, j).powi(2);
            cm.push(
                Matrix5::from_fn(|i, j| match (i, j) {
                    (0, 0) => 0.0,
                    (0, _) | (_, 0) => 1.0,
                    _ => sq(i - 1, j - 1),
                })
                .determinant(),
            );
            Ok(Embeddability {
                embeddable,
                dimension,
                eigenvalues: eig,
                cayley_menger: cm,
            })
        }
        ComparisonModel::Spherical => {
            if dm.max_entry() > PI * s {
                return Err(GeoError::InvalidMatrix(format!(
                    "entry {} exceeds the spherical diameter {}",
                    dm.max_entry(),
                    PI * s
                )));
            }
            let c = Matrix4::from_fn(|i, j| (dm.get(i, j) / s).cos());
            let eig = eig_ascending(SymmetricEigen::new(c).eigenvalues.iter().copied());
            let embeddable = eig[0] >= -1e-9;
            let dimension = embeddable.then(|| eig.iter().filter(|e| **e > 1e-9).count().saturating_sub(1));
            Ok(Embeddability {
                embeddable,
                dimension,
                eigenvalues: eig,
                cayley_menger: Vec::new(),
            })
        }
        ComparisonModel::Hyperbolic => {
            let h = Matrix4::from_fn(|i, j| (dm.get(i, j) / s).cosh());
            let eig = eig_ascending(SymmetricEigen::new(h).eigenvalues.iter().copied());
            let scale = eig.iter().fold(1.0f64, |m, e| m.max(e.abs()));
            let tol = 1e-9 * scale;
            let positive = eig.iter().filter(|e| **e > tol).count();
            let embeddable = positive == 1;
            let dimension = embeddable.then(|| eig.iter().filter(|e| **e < -tol).count());
            Ok(Embeddability {
                embeddable,
                dimension,
                eigenvalues: eig,
                cayley_menger: Vec::new(),
            })
        }
    }
}

/// Signed side of `p` relative to the oriented geodesic through `b` then `c`.
fn side_of(space: &SpaceHandle, b: V3, c: V3, p: V3) -> f64 {
    match space.model() {
        Model::Sphere => linalg::dot(linalg::cross(b, c), p),
        Model::PoincareDisk => {
            let rot = disk::to_origin(disk::c(b), disk::c(c));
            let z = disk::to_origin(disk::c(b), disk::c(p)) * rot.conj();
            z.im
        }
        _ => linalg::cross2(linalg::sub(c, b), linalg::sub(p, b)),
    }
}

/// Intersection of the angular bisector at vertex `vertex_index` with the
/// opposite side, and `|BD / DC - AB / AC|`. The bisector leaves the vertex
/// along the sum of the two metric unit tangents.
pub fn angle_bisector_ratio_residual(space: &SpaceHandle, triangle: &Triangle, vertex_index: usize) -> Result<f64> {
    Ok(angle_bisector_foot(space, triangle, vertex_index)?.1)
}

/// Bisector foot `D` on the opposite side and the ratio residual.
pub fn angle_bisector_foot(space: &SpaceHandle, triangle: &Triangle, vertex_index: usize) -> Result<(PointChart, f64)> {
    if vertex_index > 2 {
        return Err(GeoError::DegenerateInput(format!("vertex index {vertex_index} > 2")));
    }
    let v = triangle.vertices();
    let (a, b, c) = (v[vertex_index], v[(vertex_index + 1) % 3], v[(vertex_index + 2) % 3]);
    let (av, bv, cv) = (a.v(), b.v(), c.v());
    let unit = |t: V3| linalg::scale(t, 1.0 / space.tangent_norm(av, t));
    let tb = space.tangent_raw(av, bv).ok_or(GeoError::NoIntersection)?;
    let tc = space.tangent_raw(av, cv).ok_or(GeoError::NoIntersection)?;
    let w = linalg::normalize(linalg::add(unit(tb), unit(tc))).ok_or(GeoError::NoIntersection)?;
    let ab = space.distance(&a, &b)?;
    let ac = space.distance(&a, &c)?;
    let mut reach = 2.0 * (ab + ac);
    if matches!(space.model(), Model::Sphere) {
        reach = reach.min(PI - 1e-3);
    }
    let f = |s: f64| side_of(space, bv, cv, space.shoot_raw(av, w, s));
    let bracket = numeric::sign_brackets(f, 0.0, reach, 256)
        .into_iter()
        .find(|(lo, _)| *lo > 0.0 || f(0.0) != 0.0)
        .ok_or(GeoError::NoIntersection)?;
    let s = numeric::bisect(f, bracket.0, bracket.1, 1e-15, 200).ok_or(GeoError::NoIntersection)?;
    let d = space.point_v(space.shoot_raw(av, w, s)).map_err(|_| GeoError::NoIntersection)?;
    let bd = space.distance(&b, &d)?;
    let dc = space.distance(&d, &c)?;
    if dc <= 0.0 {
        return Err(GeoError::NoIntersection);
    }
    Ok((d, (bd / dc - ab / ac).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Region;

    fn set() -> SearchSettings {
        SearchSettings::with_seed(3)
    }

    fn octant() -> (SpaceHandle, [PointChart; 3]) {
        let s = SpaceHandle::sphere();
        let p = [
            s.point(&[1.0, 0.0, 0.0]).unwrap(),
            s.point(&[0.0, 1.0, 0.0]).unwrap(),
            s.point(&[0.0, 0.0, 1.0]).unwrap(),
        ];
        (s, p)
    }

    #[test]
    fn margin_examples() {
        let e = SpaceHandle::euclidean(2).unwrap();
        let p = |x: f64, y: f64| e.point(&[x, y]).unwrap();
        let m = curvature_margin(&e, &p(0.1, 0.2), &p(1.3, -0.4), &p(0.5, 0.9), &set()).unwrap();
        assert!(m.abs() < 1e-9);

        let (s, [a, b, c]) = octant();
        // oracle: midpoints (1,0,1)/sqrt2 and (0,1,1)/sqrt2 have dot 1/2
        let oracle = 0.5f64.acos() - 0.25 * PI;
        assert!((oracle - 0.261799387799).abs() < 1e-11);
        let m = curvature_margin(&s, &a, &b, &c, &set()).unwrap();
        assert!((m - oracle).abs() < 1e-9);

        let k = SpaceHandle::minkowski_p(4.0).unwrap();
        let p = |x: f64, y: f64| k.point(&[x, y]).unwrap();
        let m = curvature_margin(&k, &p(0.0, 0.0), &p(1.0, 0.0), &p(0.3, 0.8), &set()).unwrap();
        assert!(m.abs() < 1e-9);

        let d = SpaceHandle::poincare_disk();
        let p = |x: f64, y: f64| d.point(&[x, y]).unwrap();
        let m = curvature_margin(&d, &p(0.0, 0.0), &p(0.6, 0.0), &p(0.0, 0.6), &set()).unwrap();
        assert!(m < -1e-3, "{m}");
    }

    #[test]
    fn labels() {
        assert_eq!(CurvatureLabel::from_margins(&[0.0, 1e-8], 1e-7), CurvatureLabel::Zero);
        assert_eq!(CurvatureLabel::from_margins(&[-1.0, -0.5], 1e-7), CurvatureLabel::Negative);
        assert_eq!(CurvatureLabel::from_margins(&[-1.0, 0.0], 1e-7), CurvatureLabel::Nonpositive);
        assert_eq!(CurvatureLabel::from_margins(&[1.0, 0.0], 1e-7), CurvatureLabel::Nonnegative);
        assert_eq!(CurvatureLabel::from_margins(&[1.0, 2.0], 1e-7), CurvatureLabel::Positive);
        assert_eq!(CurvatureLabel::from_margins(&[1.0, -1.0], 1e-7), CurvatureLabel::Indeterminate);
    }

    #[test]
    fn classify_small_runs() {
        let e = SpaceHandle::euclidean(2).unwrap();
        let v = classify_curvature(&e, &TripleSampler::new(Region::square(1.0)), 30, VERDICT_TOL, &set()).unwrap();
        assert_eq!(v.label, CurvatureLabel::Zero);
        assert!(v.min_margin <= v.max_margin);
        let k = SpaceHandle::poincare_disk();
        let v = classify_curvature(&k, &TripleSampler::new(Region::ball(0.8)), 30, VERDICT_TOL, &set()).unwrap();
        assert_eq!(v.label, CurvatureLabel::Negative);
        assert!(matches!(
            classify_curvature(&k, &TripleSampler::new(Region::ball(0.8)), 29, VERDICT_TOL, &set()),
            Err(GeoError::InsufficientSamples(_))
        ));
    }

    #[test]
    fn cosine_and_excess_examples() {
        let e = SpaceHandle::euclidean(2).unwrap();
        let t = e
            .triangle_measure(&e.point(&[0.0, 0.0]).unwrap(), &e.point(&[4.0, 0.0]).unwrap(), &e.point(&[0.0, 3.0]).unwrap())
            .unwrap();
        assert!(cosine_inequality_residual(&t).abs() < 1e-9);
        assert!(angle_excess(&t).abs() < 1e-9);

        let k = SpaceHandle::poincare_disk();
        let t = k
            .triangle_measure(&k.point(&[0.0, 0.0]).unwrap(), &k.point(&[0.6, 0.0]).unwrap(), &k.point(&[0.0, 0.6]).unwrap())
            .unwrap();
        assert!(cosine_inequality_residual(&t) >= 1e-4);

        let (s, [a, b, c]) = octant();
        let t = s.triangle_measure(&a, &b, &c).unwrap();
        let oracle = -PI * PI / 4.0;
        assert!((cosine_inequality_residual(&t) - oracle).abs() < 1e-9);
        assert!((angle_excess(&t) - PI / 2.0).abs() < 1e-9);

        let r = 0.9;
        let q = |th: f64| k.point(&[r * th.cos(), r * th.sin()]).unwrap();
        let t = k.triangle_measure(&q(0.0), &q(2.0 * PI / 3.0), &q(4.0 * PI / 3.0)).unwrap();
        assert!(angle_excess(&t) < -0.5, "{}", angle_excess(&t));
    }

    #[test]
    fn quadruple_examples() {
        let r2 = 2f64.sqrt();
        let sq = DistanceMatrix4::from_upper([1.0, r2, 1.0, 1.0, r2, 1.0]).unwrap();
        let e = quadruple_embeddability(&sq, ComparisonModel::Euclidean, 1.0).unwrap();
        assert!(e.embeddable);
        assert_eq!(e.dimension, Some(2));
        assert!(e.cayley_menger[4].abs() < 1e-12);

        let s = SpaceHandle::sphere();
        let k = 1.0 / 3f64.sqrt();
        let pts = [
            s.point(&[1.0, 0.0, 0.0]).unwrap(),
            s.point(&[0.0, 1.0, 0.0]).unwrap(),
            s.point(&[0.0, 0.0, 1.0]).unwrap(),
            PointChart::sphere_normalized([k, k, k]).unwrap(),
        ];
        let dm = DistanceMatrix4::from_points(&s, &pts).unwrap();
        assert!(quadruple_embeddability(&dm, ComparisonModel::Spherical, 1.0).unwrap().embeddable);

        assert!(matches!(
            DistanceMatrix4::from_upper([1.0 + 1.0 + 0.5, 1.0, 3.0, 1.0, 3.0, 3.0]),
            Err(GeoError::InvalidMatrix(_))
        ));

        // four points of the disk sit in the hyperbolic plane
        let k = SpaceHandle::poincare_disk();
        let pts = [[0.1, 0.2], [-0.5, 0.3], [0.4, -0.6], [0.0, 0.7]].map(|p| k.point(&p).unwrap());
        let dm = DistanceMatrix4::from_points(&k, &pts).unwrap();
        let h = quadruple_embeddability(&dm, ComparisonModel::Hyperbolic, 1.0).unwrap();
        assert!(h.embeddable && h.dimension == Some(2), "{h:?}");
        assert!(!quadruple_embeddability(&dm, ComparisonModel::Euclidean, 1.0).unwrap().embeddable);
    }

    #[test]
    fn bisector_ratio_examples() {
        let e = SpaceHandle::euclidean(2).unwrap();
        let t = e
            .triangle_measure(&e.point(&[0.0, 0.0]).unwrap(), &e.point(&[4.0, 0.0]).unwrap(), &e.point(&[0.0, 3.0]).unwrap())
            .unwrap();
        let (d, r) = angle_bisector_foot(&e, &t, 0).unwrap();
        assert!((d.coords()[0] - 12.0 / 7.0).abs() < 1e-12 && (d.coords()[1] - 12.0 / 7.0).abs() < 1e-12);
        assert!(r < 1e-9);

        let s = SpaceHandle::sphere();
        let eps = 0.01;
        let p = |x: f64, y: f64| PointChart::sphere_normalized([1.0, x, y]).unwrap();
        let t = s.triangle_measure(&p(0.0, 0.0), &p(4.0 * eps, 0.0), &p(0.0, 3.0 * eps)).unwrap();
        assert!(angle_bisector_ratio_residual(&s, &t, 0).unwrap() < 1e-4);

        let k = SpaceHandle::poincare_disk();
        let t = k
            .triangle_measure(&k.point(&[0.0, 0.0]).unwrap(), &k.point(&[0.8, 0.0]).unwrap(), &k.point(&[0.0, 0.5]).unwrap())
            .unwrap();
        assert!(angle_bisector_ratio_residual(&k, &t, 0).unwrap() > 1e-3);
    }

    #[test]
    fn normed_planes_keep_the_ratio() {
        // metric unit tangents make the ratio exact in every normed plane
        for sp in [SpaceHandle::minkowski_p(4.0).unwrap(), SpaceHandle::minkowski_p(1.5).unwrap()] {
            let t = sp
                .triangle_measure(&sp.point(&[0.0, 0.0]).unwrap(), &sp.point(&[4.0, 0.0]).unwrap(), &sp.point(&[0.5, 3.0]).unwrap())
                .unwrap();
            for i in 0..3 {
                assert!(angle_bisector_ratio_residual(&sp, &t, i).unwrap() < 1e-9);
            }
        }
    }
}
