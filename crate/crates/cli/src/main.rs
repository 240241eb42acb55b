use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use pumatune_core::tuning::{run_compare, run_simulate, run_tune, RunConfig};

/// Computed-torque simulation and multi-objective gain tuning for a PUMA 560 arm.
#[derive(Parser)]
#[command(name = "pumatune", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the configured gains along the configured trajectory.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `[output] dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-joint desired-vs-actual files.
        #[arg(long)]
        plots: bool,
    },
    /// Tune the twelve PD gains with NSGA-II.
    Tune {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-joint tracking files for the compromise gains.
        #[arg(long)]
        plots: bool,
    },
    /// Tune with both operator families and compare the per-objective bests.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path, seed: Option<u64>) -> Result<RunConfig> {
    let mut cfg = RunConfig::from_file(path)?;
    if let Some(seed) = seed {
        cfg.optimizer.seed = seed;
    }
    Ok(cfg)
}

fn print_files(files: &[PathBuf]) {
    println!("wrote:");
    for f in files {
        println!("  {}", f.display());
    }
}

fn run(cli: Cli) -> Result<()> {
    let start = Instant::now();
    match cli.command {
        Command::Simulate { config, out, plots } => {
            let cfg = load(&config, None)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            let report = run_simulate(&cfg, &dir, plots).context("simulate failed")?;
            print!("{report}");
            print_files(&report.files);
        }
        Command::Tune {
            config,
            seed,
            out,
            plots,
        } => {
            let cfg = load(&config, seed)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            let report = run_tune(&cfg, &dir, plots).context("tune failed")?;
            print!("{report}");
            print_files(&report.files);
        }
        Command::Compare { config, seed, out } => {
            let cfg = load(&config, seed)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            let report = run_compare(&cfg, &dir).context("compare failed")?;
            print!("{report}");
            print_files(&report.files);
        }
    }
    println!("wall-clock: {:.4} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
