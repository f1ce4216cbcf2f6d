//! Poincare disk helpers built on disk automorphisms.

use num_complex::Complex64;

use crate::linalg::V3;

#[inline]
pub(crate) fn c(v: V3) -> Complex64 {
    Complex64::new(v[0], v[1])
}

#[inline]
pub(crate) fn v(z: Complex64) -> V3 {
    [z.re, z.im, 0.0]
}

/// Isometry sending `a` to the origin: `z -> (z - a) / (1 - conj(a) z)`.
#[inline]
pub(crate) fn to_origin(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// Inverse of [`to_origin`]. Its derivative at 0 is the positive real
/// `1 - |a|^2`, so directions at the origin are carried unchanged to `a`.
#[inline]
pub(crate) fn from_origin(a: Complex64, w: Complex64) -> Complex64 {
    (w + a) / (Complex64::new(1.0, 0.0) + a.conj() * w)
}

/// `1 - |z|^2` without cancellation near the boundary.
#[inline]
pub(crate) fn conformal_gap(z: V3) -> f64 {
    let r = z[0].hypot(z[1]);
    (1.0 - r) * (1.0 + r)
}

/// `d(x, y) = 2 asinh(|x - y| / sqrt((1 - |x|^2)(1 - |y|^2)))`.
pub(crate) fn distance_raw(x: V3, y: V3) -> f64 {
    let num = (x[0] - y[0]).hypot(x[1] - y[1]);
    2.0 * (num / (conformal_gap(x) * conformal_gap(y)).sqrt()).asinh()
}

/// Point at hyperbolic distance `s` from `a` in the unit direction `dir`.
pub(crate) fn point_along_raw(a: V3, dir: V3, s: f64) -> V3 {
    let w = Complex64::new(dir[0], dir[1]) * (0.5 * s).tanh();
    v(from_origin(c(a), w))
}

/// Unit chart direction of the geodesic from `a` toward `b`.
pub(crate) fn tangent(a: V3, b: V3) -> Option<V3> {
    let w = to_origin(c(a), c(b));
    let n = w.norm();
    (n > 0.0 && n.is_finite()).then(|| [w.re / n, w.im / n, 0.0])
}

/// Ideal endpoint of the geodesic leaving `a` in unit direction `dir`.
pub(crate) fn ideal_endpoint(a: V3, dir: V3) -> V3 {
    v(from_origin(c(a), Complex64::new(dir[0], dir[1])))
}

/// `d(x, r(T)) - T` for the ray `r` leaving `base` in unit direction `dir`,
/// evaluated without forming the near-boundary point `r(T)`.
///
/// After moving the base to the origin and the direction to `+1`, with
/// `A = cosh d = 1 + 2|z - r|^2 cosh^2(T/2) / (1 - |z|^2)` and `r = tanh(T/2)`,
/// `d - T = ln((A + sqrt(A^2 - 1)) e^{-T})` where every factor stays bounded.
pub(crate) fn busemann_term(base: V3, dir: V3, x: V3, t: f64) -> f64 {
    let rot = Complex64::new(dir[0], -dir[1]);
    let z = to_origin(c(base), c(x)) * rot;
    let r = (0.5 * t).tanh();
    let e = (-t).exp();
    let diff2 = (z.re - r).powi(2) + z.im.powi(2);
    let gap = conformal_gap(v(z));
    let a_scaled = e + 2.0 * diff2 * (1.0 + e).powi(2) / (4.0 * gap);
    let root = ((a_scaled - e) * (a_scaled + e)).max(0.0).sqrt();
    (a_scaled + root).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_round_trip() {
        let a = Complex64::new(0.3, -0.4);
        let z = Complex64::new(-0.1, 0.7);
        let back = from_origin(a, to_origin(a, z));
        assert!((back - z).norm() < 1e-15);
        assert!(to_origin(a, a).norm() < 1e-16);
    }

    #[test]
    fn busemann_term_matches_direct_difference_at_moderate_t() {
        let base = [0.1, 0.2, 0.0];
        let dir = [0.6, -0.8, 0.0];
        let x = [-0.3, 0.25, 0.0];
        for t in [1.0, 4.0, 9.0] {
            let direct = distance_raw(x, point_along_raw(base, dir, t)) - t;
            assert!((busemann_term(base, dir, x, t) - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn busemann_limit_closed_form() {
        // b(z) = ln(|z - 1|^2 / (1 - |z|^2)) for the ray from 0 toward 1
        let z = [0.2, 0.3, 0.0];
        let exact = (((z[0] - 1.0f64).powi(2) + z[1] * z[1]) / conformal_gap(z)).ln();
        assert!((busemann_term([0.0; 3], [1.0, 0.0, 0.0], z, 1e6) - exact).abs() < 1e-14);
    }
}
