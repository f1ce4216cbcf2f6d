//! Classifies the curvature sign of several model spaces from seeded triples.

use metric_geodesy::curvature::classify_curvature;
use metric_geodesy::{Region, SearchSettings, SpaceHandle, TripleSampler};

fn main() -> metric_geodesy::Result<()> {
    let settings = SearchSettings::with_seed(11);
    let cases = [
        (SpaceHandle::euclidean(2)?, Region::square(1.0)),
        (SpaceHandle::minkowski_p(4.0)?, Region::square(1.0)),
        (SpaceHandle::poincare_disk(), Region::ball(0.8)),
        (SpaceHandle::sphere(), Region::SphereOctant),
    ];
    for (space, region) in cases {
        let v = classify_curvature(&space, &TripleSampler::new(region), 100, 1e-7, &settings)?;
        println!(
            "{:28} {:?}  margins [{:.3e}, {:.3e}]",
            space.name(),
            v.label,
            v.min_margin,
            v.max_margin
        );
    }
    Ok(())
}
