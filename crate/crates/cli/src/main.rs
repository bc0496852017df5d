use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sharpconst_cli::config::experiments_help;
use sharpconst_cli::{run_experiment, CliError, Experiment, ExperimentConfig, Format};

#[derive(Debug, Parser)]
#[command(
    name = "sharp-approx",
    version,
    about = "Run sharp-constant experiments and write their reports"
)]
#[command(after_help = experiments_help())]
struct Args {
    /// Experiment to run.
    experiment: Experiment,

    /// Config file of `key = value` lines.
    #[arg(long)]
    config: PathBuf,

    /// Directory receiving `<experiment>.csv`, `.json` and `.svg`.
    #[arg(long, default_value = "results")]
    out: PathBuf,

    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,

    /// Comma-separated subset of csv,json,svg; empty writes nothing.
    #[arg(long, default_value = "csv,json,svg")]
    format: String,
}

fn run(args: &Args) -> Result<(), CliError> {
    let formats = Format::parse_list(&args.format).map_err(|e| CliError::Validation(vec![e]))?;
    if args.jobs == Some(0) {
        return Err(CliError::Validation(vec!["--jobs must be positive".into()]));
    }
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::ReadConfig {
        path: args.config.display().to_string(),
        source,
    })?;
    let config = ExperimentConfig::parse(args.experiment, &text, args.out.clone())?;
    let report = run_experiment(&config, &formats, args.jobs)?;
    match &report.extrapolation {
        Some(e) => println!(
            "{}: limit {:.12} (error estimate {})",
            report.experiment,
            e.limit,
            e.error_estimate.map_or("n/a".into(), |v| format!("{v:.3e}"))
        ),
        None => println!("{}: {} rows, no limit", report.experiment, report.rows.len()),
    }
    if let Some(c) = &report.comparison {
        println!(
            "{} {:.12} vs {} {:.12} (gap {:.3e})",
            c.left_label, c.left, c.right_label, c.right, c.gap
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
