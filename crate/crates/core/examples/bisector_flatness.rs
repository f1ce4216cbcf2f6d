//! Bisector flatness in the Euclidean plane, the disk and an l^4 plane.

use metric_geodesy::bisector::flatness_test;
use metric_geodesy::{SearchSettings, SpaceHandle};

fn main() -> metric_geodesy::Result<()> {
    let settings = SearchSettings::with_seed(5);
    let spaces = [
        SpaceHandle::euclidean(2)?,
        SpaceHandle::poincare_disk(),
        SpaceHandle::minkowski_p(4.0)?,
    ];
    for space in &spaces {
        let p = space.point(&[0.0, 0.0])?;
        let q = space.point(&[0.5, 0.2])?;
        let r = flatness_test(space, &p, &q, 50, 1e-5, &settings)?;
        println!("{:28} flat={} worst defect {:.3e}", space.name(), r.flat, r.worst_defect);
    }
    Ok(())
}
