//! Four-point embeddability into the Euclidean plane.

use metric_geodesy::curvature::{quadruple_embeddability, ComparisonModel, DistanceMatrix4};
use std::f64::consts::SQRT_2;

fn main() -> metric_geodesy::Result<()> {
    let cases = [
        ("unit square", [1.0, SQRT_2, 1.0, 1.0, SQRT_2, 1.0]),
        ("stretched diagonal", [1.0, 1.6, 1.0, 1.0, SQRT_2, 1.0]),
        ("four-point star", [2.0, 2.0, 1.0, 2.0, 1.0, 1.0]),
    ];
    for (name, upper) in cases {
        let dm = DistanceMatrix4::from_upper(upper)?;
        let e = quadruple_embeddability(&dm, ComparisonModel::Euclidean, 1.0)?;
        let eig: Vec<String> = e.eigenvalues.iter().map(|x| format!("{x:.3e}")).collect();
        println!("{name:20} embeddable={} dimension={:?} eigenvalues [{}]", e.embeddable, e.dimension, eig.join(", "));
    }
    Ok(())
}
