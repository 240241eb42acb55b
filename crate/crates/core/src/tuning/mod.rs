//! Gain tuning: chromosome mapping, the six-objective IAE problem, and the
//! `simulate` / `tune` / `compare` commands.

mod chromosome;
mod commands;
mod config;
mod problem;

pub use chromosome::{Chromosome, NUM_GENES};
pub use commands::{
    gain_columns, run_compare, run_simulate, run_tune, CompareReport, SimulateReport, TuneReport,
};
pub use config::{OptimizerSettings, RunConfig};
pub use problem::GainTuningProblem;
