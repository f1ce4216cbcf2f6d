use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use metric_geodesy::experiment::{emit_report, run_experiment, run_suite, ExperimentConfig, ReportFormat};

#[derive(Parser)]
#[command(name = "metric-geodesy", version, about = "Run metric-geometry experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a JSON config.
    Run {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output prefix; defaults to the config's `output` field.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full property battery.
    Suite {
        #[arg(long, default_value = "suite-out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cli.command {
        Command::Run { config, format, out } => {
            let result = ExperimentConfig::load(&config).and_then(|cfg| {
                let report = run_experiment(&cfg)?;
                let prefix = out
                    .or_else(|| cfg.output.clone().map(PathBuf::from))
                    .unwrap_or_else(|| PathBuf::from(cfg.experiment.as_str()));
                let format = match format {
                    Format::Csv => ReportFormat::Csv,
                    Format::Json => ReportFormat::Json,
                };
                let path = emit_report(&report, format, &prefix)?;
                Ok((report, path))
            });
            match result {
                Ok((report, path)) => {
                    let status = if report.passed { "pass" } else { "FAIL" };
                    println!("{status} {} -> {}", report.header.experiment.as_str(), path.display());
                    ExitCode::from(if report.passed { 0 } else { 2 })
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Suite { out } => match run_suite(&out) {
            Ok(outcome) => {
                for (name, status) in &outcome.entries {
                    println!("{status:5} {name}");
                }
                ExitCode::from(outcome.exit_code() as u8)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
