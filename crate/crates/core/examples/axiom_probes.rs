//! Betweenness, extendability and unique extension probes.

use metric_geodesy::solver::{betweenness_witness, extendability_probe, extension_uniqueness_probe};
use metric_geodesy::{SearchSettings, SpaceHandle};

fn main() -> metric_geodesy::Result<()> {
    let settings = SearchSettings::with_seed(4);
    for space in [SpaceHandle::minkowski_p(4.0)?, SpaceHandle::poincare_disk(), SpaceHandle::hilbert_unit_disk()] {
        let x = space.point(&[-0.3, 0.1])?;
        let y = space.point(&[0.2, 0.25])?;
        for r in [
            betweenness_witness(&space, &x, &y, &settings)?,
            extendability_probe(&space, &x, &y, 0.1, &settings)?,
            extension_uniqueness_probe(&space, &x, &y, 0.1, &settings)?,
        ] {
            println!("{:28} {:?} residual {:.3e} passed {}", space.name(), r.axiom, r.residual, r.passed);
        }
    }
    Ok(())
}
