use metric_geodesy::models::PolygonNorm;
use metric_geodesy::rng;
use metric_geodesy::{PointChart, Region, SpaceHandle};
use proptest::prelude::*;

fn spaces() -> Vec<(SpaceHandle, Region)> {
    vec![
        (SpaceHandle::euclidean(2).unwrap(), Region::square(2.0)),
        (
            SpaceHandle::euclidean(3).unwrap(),
            Region::Box {
                lo: vec![-2.0; 3],
                hi: vec![2.0; 3],
            },
        ),
        (
            SpaceHandle::sphere(),
            Region::SphereCap {
                pole: [0.0, 0.0, 1.0],
                angle: 1.4,
            },
        ),
        (SpaceHandle::poincare_disk(), Region::ball(0.95)),
        (SpaceHandle::minkowski_p(1.5).unwrap(), Region::square(2.0)),
        (SpaceHandle::minkowski_p(4.0).unwrap(), Region::square(2.0)),
        (SpaceHandle::minkowski_p(f64::INFINITY).unwrap(), Region::square(2.0)),
        (
            SpaceHandle::minkowski_polygon(PolygonNorm::seeded(3, 4).unwrap().vertices().to_vec()).unwrap(),
            Region::square(2.0),
        ),
        (SpaceHandle::hilbert_unit_disk(), Region::ball(0.95)),
        (SpaceHandle::hilbert_unit_square(), Region::square(0.95)),
    ]
}

fn draw(space: &SpaceHandle, region: &Region, seed: u64, n: usize) -> Vec<PointChart> {
    let mut r = rng::stream(seed, 1, 0);
    (0..n).map(|_| region.sample(space, &mut r).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(1000) })]

    #[test]
    fn metric_axioms(seed in any::<u64>()) {
        for (space, region) in spaces() {
            let p = draw(&space, &region, seed, 3);
            let d = |i: usize, j: usize| space.distance(&p[i], &p[j]).unwrap();
            prop_assert_eq!(d(0, 1), d(1, 0));
            prop_assert_eq!(d(0, 0), 0.0);
            prop_assert!(d(0, 1) > 0.0);
            prop_assert!(d(0, 1) + d(1, 2) - d(0, 2) >= -1e-9, "{}: {:?}", space.name(), p);
        }
    }

    #[test]
    fn minkowski_is_translation_invariant(c in prop::array::uniform6(-4096i32..4096)) {
        let f = |k: i32| k as f64 / 1024.0;
        for p in [1.5, 2.0, 4.0, f64::INFINITY] {
            let m = SpaceHandle::minkowski_p(p).unwrap();
            let x = m.point(&[f(c[0]), f(c[1])]).unwrap();
            let y = m.point(&[f(c[2]), f(c[3])]).unwrap();
            let xs = m.point(&[f(c[0]) + f(c[4]), f(c[1]) + f(c[5])]).unwrap();
            let ys = m.point(&[f(c[2]) + f(c[4]), f(c[3]) + f(c[5])]).unwrap();
            prop_assert_eq!(m.distance(&x, &y).unwrap(), m.distance(&xs, &ys).unwrap());
        }
    }

    #[test]
    fn l2_plane_is_euclidean(seed in any::<u64>()) {
        let m = SpaceHandle::minkowski_p(2.0).unwrap();
        let e = SpaceHandle::euclidean(2).unwrap();
        let p = draw(&e, &Region::square(5.0), seed, 2);
        let (x, y) = (m.point(p[0].coords()).unwrap(), m.point(p[1].coords()).unwrap());
        let (dm, de) = (m.distance(&x, &y).unwrap(), e.distance(&p[0], &p[1]).unwrap());
        prop_assert!((dm - de).abs() <= 1e-12 * de.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn segments_are_consistent(seed in any::<u64>()) {
        for (space, region) in spaces() {
            let p = draw(&space, &region, seed, 2);
            if p[0].chart_distance(&p[1]) < 1e-3 {
                continue;
            }
            let len = space.distance(&p[0], &p[1]).unwrap();
            for k in 1..=10 {
                let t = k as f64 / 11.0;
                let z = space.geodesic_point(&p[0], &p[1], t).unwrap();
                let (a, b) = (space.distance(&p[0], &z).unwrap(), space.distance(&z, &p[1]).unwrap());
                let tol = 1e-9 * len.max(1.0);
                prop_assert!((a - t * len).abs() <= tol, "{} t={} {} vs {}", space.name(), t, a, t * len);
                prop_assert!((b - (1.0 - t) * len).abs() <= tol);
            }
        }
    }

    #[test]
    fn angles_are_bounded_and_symmetric(seed in any::<u64>()) {
        for (space, region) in spaces() {
            let p = draw(&space, &region, seed, 3);
            let Ok(a) = space.angle_at(&p[0], &p[1], &p[2]) else { continue };
            let b = space.angle_at(&p[0], &p[2], &p[1]).unwrap();
            prop_assert!(a > 0.0 && a < std::f64::consts::PI);
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn hilbert_cross_ratio_is_projectively_invariant(seed in any::<u64>(), m in prop::array::uniform3(0.2f64..3.0)) {
        for space in [SpaceHandle::hilbert_unit_disk(), SpaceHandle::hilbert_unit_square()] {
            let p = draw(&space, &Region::square(0.9), seed, 2);
            if p[0].chart_distance(&p[1]) < 1e-3 {
                continue;
            }
            let hits = space.chord_boundary_hits(&p[0], &p[1]).unwrap();
            let (x, y) = (p[0].coords(), p[1].coords());
            let u = [(y[0] - x[0]), (y[1] - x[1])];
            let proj = |q: [f64; 2]| (q[0] - x[0]) * u[0] + (q[1] - x[1]) * u[1];
            let (ta, tb) = (proj(hits.entry), proj(hits.exit));
            let want = space.distance(&p[0], &p[1]).unwrap();
            let (a0, x0, y0, b0) = (ta, 0.0, proj([y[0], y[1]]), tb);
            let d0 = 0.5 * (((y0 - a0) * (b0 - x0)) / ((x0 - a0) * (b0 - y0))).ln();
            // a projective map of the line with its pole left of the chord
            let pole = ta - m[0];
            let h = |t: f64| m[1] / (t - pole) + m[2];
            let (a1, x1, y1, b1) = (h(a0), h(x0), h(y0), h(b0));
            let d1 = 0.5 * (((y1 - a1) * (b1 - x1)) / ((x1 - a1) * (b1 - y1))).ln();
            prop_assert!((d0 - want).abs() <= 1e-10 * want.max(1.0), "{} {}", d0, want);
            prop_assert!((d1 - want).abs() <= 1e-10 * want.max(1.0), "{} {}", d1, want);
        }
    }
}
