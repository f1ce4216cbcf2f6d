//! Distances along chords of Hilbert domains add up exactly.

use metric_geodesy::asymptotics::additivity_straightness_residual;
use metric_geodesy::{rng, Region, SpaceHandle};

fn main() -> metric_geodesy::Result<()> {
    for space in [SpaceHandle::hilbert_unit_disk(), SpaceHandle::hilbert_unit_square()] {
        let mut r = rng::stream(9, 0, 0);
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let x = Region::ball(0.6).sample(&space, &mut r)?;
            let z = Region::ball(0.6).sample(&space, &mut r)?;
            let y = space.geodesic_point(&x, &z, 0.37)?;
            worst = worst.max(additivity_straightness_residual(&space, &x, &y, &z)?);
        }
        println!("{:28} worst residual {worst:.3e}", space.name());
    }
    Ok(())
}
