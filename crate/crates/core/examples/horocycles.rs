//! Samples a horocycle in a normed plane and in the disk, fits a line to
//! each, and shows metric circles closing in on the disk horocycle.

use metric_geodesy::asymptotics::{
    circle_to_horocycle_convergence, fit_circle, horocycle_line_fit_residual, limit_sphere_sample,
};
use metric_geodesy::{RaySpec, SpaceHandle};

fn main() -> metric_geodesy::Result<()> {
    for space in [SpaceHandle::minkowski_p(1.5)?, SpaceHandle::poincare_disk()] {
        let o = space.point(&[0.0, 0.0])?;
        let ray = RaySpec::new(&space, o, &[1.0, 0.0])?;
        let cloud = limit_sphere_sample(&ray, &o, 41, 1e-9, 1)?;
        let line = horocycle_line_fit_residual(&cloud)?;
        let circle = fit_circle(&cloud.points())?;
        println!(
            "{:28} line residual {:.3e}, circle center ({:.4}, {:.4}) radius {:.4}",
            space.name(),
            line,
            circle.center[0],
            circle.center[1],
            circle.radius
        );
        let gaps = circle_to_horocycle_convergence(&ray, &o, &[2.0, 4.0, 8.0, 16.0], 1e-9, 1)?;
        let gaps: Vec<String> = gaps.iter().map(|g| format!("{g:.3e}")).collect();
        println!("{:28} circle gaps {}", "", gaps.join(" > "));
    }
    Ok(())
}
