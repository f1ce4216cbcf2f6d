//! Geodesics from a point to ever farther points of a line converge to an
//! asymptote; in the disk its endpoint is the line's ideal endpoint.

use metric_geodesy::asymptotics::asymptote_limit;
use metric_geodesy::{GeodesicLine, SearchSettings, SpaceHandle};

fn main() -> metric_geodesy::Result<()> {
    let t: Vec<f64> = (1..=24).map(|k| 2f64.powi(k)).collect();
    let settings = SearchSettings::with_seed(2);
    for space in [SpaceHandle::euclidean(2)?, SpaceHandle::poincare_disk()] {
        let line = GeodesicLine::new(&space, space.point(&[0.0, 0.0])?, &[1.0, 0.0])?;
        let p = space.point(&[0.0, 0.5])?;
        let r = asymptote_limit(&space, &p, &line, &t, &settings)?;
        println!(
            "{:28} last divergence {:.3e}, direction ({:.6}, {:.6}), endpoint {:?}",
            space.name(),
            r.divergences.last().copied().unwrap_or(f64::NAN),
            r.final_direction[0],
            r.final_direction[1],
            r.ideal_endpoint
        );
    }
    Ok(())
}
