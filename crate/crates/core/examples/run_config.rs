//! Runs an experiment config in process and prints its CSV report.

use metric_geodesy::experiment::{run_experiment, ExperimentConfig, ExperimentKind, SpaceSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ExperimentConfig::new(ExperimentKind::Perpendicularity, SpaceSpec::name("minkowski-p4"), 17)
        .with_param("n_configs", 10)
        .with_param("expect", "asymmetric");
    let report = run_experiment(&config)?;
    print!("{}", String::from_utf8(report.to_csv()?)?);
    eprintln!("passed: {}", report.passed);
    Ok(())
}
