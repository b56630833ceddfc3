use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use shub_lab::{run, Experiment, ExperimentConfig};

/// Numerical experiments on partially hyperbolic skew products of T2 x T2.
#[derive(Debug, Parser)]
#[command(name = "shub-lab", version)]
struct Cli {
    experiment: Experiment,
    /// JSON configuration; `{}` gives the reference system.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `thread_count` (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match ExperimentConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    cfg.experiment = cli.experiment;
    if let Some(s) = cli.seed {
        cfg.master_seed = s;
    }
    if let Some(o) = cli.out {
        cfg.output_dir = o;
    }
    if let Some(t) = cli.threads {
        cfg.thread_count = t;
    }
    match run(&cfg) {
        Ok(report) => {
            for c in &report.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("report: {}", shub_lab::runner::report_path(&cfg.output_dir).display());
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
