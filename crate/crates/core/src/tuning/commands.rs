//! File-producing commands behind the CLI.

use std::fmt::{self, Write as _};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::control::{simulate, SimResult};
use crate::csvfmt;
use crate::error::{Error, Result};
use crate::integrate::ArmState;
use crate::joint::{JointVector, NUM_JOINTS};
use crate::moea::{
    evolve, write_archive_csv, write_front_csv, Columns, EvolveConfig, EvolveResult,
    GenerationRecord, Individual, OperatorFamily,
};

use super::chromosome::Chromosome;
use super::config::RunConfig;
use super::problem::GainTuningProblem;

/// Archive columns for gain chromosomes: `kp_1..kp_6, kd_1..kd_6` and `iae_1..iae_6`.
pub fn gain_columns() -> Columns {
    let mut genes: Vec<String> = (1..=NUM_JOINTS).map(|j| format!("kp_{j}")).collect();
    genes.extend((1..=NUM_JOINTS).map(|j| format!("kd_{j}")));
    Columns {
        genes,
        objectives: (1..=NUM_JOINTS).map(|j| format!("iae_{j}")).collect(),
    }
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_tracking(dir: &Path, result: &SimResult, per_joint: bool) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let path = dir.join("trajectory.csv");
    write_file(&path, |w| result.write_csv(w))?;
    written.push(path);
    if per_joint {
        for j in 0..NUM_JOINTS {
            let path = dir.join(format!("joint{}_tracking.csv", j + 1));
            write_file(&path, |w| result.write_joint_csv(j, w))?;
            written.push(path);
        }
    }
    Ok(written)
}

fn fmt_joints(v: &JointVector) -> String {
    v.iter().map(|x| format!("{x:>12.4e}")).collect::<Vec<_>>().join(" ")
}

/// Outcome of `simulate`.
#[derive(Debug, Clone)]
pub struct SimulateReport {
    pub result: SimResult,
    pub files: Vec<PathBuf>,
}

impl SimulateReport {
    pub fn iae(&self) -> JointVector {
        self.result.iae
    }

    pub fn max_abs_error(&self) -> JointVector {
        self.result.max_abs_error()
    }

    pub fn final_abs_error(&self) -> JointVector {
        self.result.final_abs_error()
    }
}

impl fmt::Display for SimulateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.result;
        writeln!(f, "samples: {}", r.len())?;
        writeln!(f, "diverged: {}", r.diverged)?;
        writeln!(f, "{:<24} {}", "joint", (1..=NUM_JOINTS).map(|j| format!("{j:>12}")).collect::<Vec<_>>().join(" "))?;
        writeln!(f, "{:<24} {}", "iae [rad*samples]", fmt_joints(&r.iae))?;
        writeln!(f, "{:<24} {}", "max |error| [deg]", fmt_joints(&r.max_abs_error().to_degrees()))?;
        writeln!(f, "{:<24} {}", "final |error| [deg]", fmt_joints(&r.final_abs_error().to_degrees()))
    }
}

/// Simulates the configured gains and writes `trajectory.csv`, `summary.txt` and,
/// with `per_joint`, `joint<j>_tracking.csv`.
pub fn run_simulate(cfg: &RunConfig, out_dir: &Path, per_joint: bool) -> Result<SimulateReport> {
    let model = cfg.load_model()?;
    let initial = ArmState {
        q: cfg.trajectory.q_initial + cfg.initial_offset,
        qd: JointVector::zeros(),
    };
    let result = simulate(&model, &cfg.gains, &cfg.trajectory, &cfg.simulation, initial)?;
    ensure_dir(out_dir)?;
    let mut files = write_tracking(out_dir, &result, per_joint)?;
    let mut report = SimulateReport { result, files: vec![] };
    let summary = out_dir.join("summary.txt");
    let text = report.to_string();
    write_file(&summary, |w| w.write_all(text.as_bytes()))?;
    files.push(summary);
    report.files = files;
    Ok(report)
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Outcome of `tune`.
#[derive(Debug, Clone)]
pub struct TuneReport {
    pub family: OperatorFamily,
    pub seed: u64,
    pub result: EvolveResult,
    pub elapsed: Duration,
    /// Final-front member with the smallest IAE sum.
    pub compromise: Individual,
    pub files: Vec<PathBuf>,
}

impl TuneReport {
    /// Per-joint median IAE of the random initial population.
    pub fn initial_median(&self) -> JointVector {
        let mut out = JointVector::zeros();
        for j in 0..NUM_JOINTS {
            out[j] = median(self.result.initial.iter().map(|i| i.objectives[j]).collect());
        }
        out
    }

    /// Per-joint best IAE after each generation (index 0 = initial population).
    pub fn best_history(&self) -> Vec<JointVector> {
        let initial = GenerationRecord {
            generation: 0,
            population: self.result.initial.clone(),
        };
        std::iter::once(&initial)
            .chain(&self.result.archive)
            .map(|rec| JointVector::from_slice(&rec.best_per_objective()).expect("six objectives"))
            .collect()
    }

    pub fn final_best(&self) -> JointVector {
        *self.best_history().last().expect("nonempty")
    }

    /// Deterministic summary (no timing).
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let r = &self.result;
        let last = r.archive.last().expect("at least one generation");
        let _ = writeln!(s, "operators: {}", self.family.name());
        let _ = writeln!(
            s,
            "population: {}  generations: {}  seed: {}  evaluations: {}",
            last.population.len(),
            r.archive.len(),
            self.seed,
            r.evaluations
        );
        let _ = writeln!(s, "final front size: {}", last.front_size());
        let _ = writeln!(s, "initial median iae: {}", fmt_joints(&self.initial_median()));
        let _ = writeln!(s, "final best iae:     {}", fmt_joints(&self.final_best()));
        let _ = writeln!(s, "\nbest per objective (final population):");
        for j in 0..NUM_JOINTS {
            let best = last
                .population
                .iter()
                .min_by(|a, b| a.objectives[j].total_cmp(&b.objectives[j]))
                .expect("nonempty");
            let _ = writeln!(
                s,
                "  iae_{} = {:.6}  kp = {:.4}  kd = {:.4}",
                j + 1,
                best.objectives[j],
                best.genes[j],
                best.genes[j + NUM_JOINTS]
            );
        }
        let _ = writeln!(s, "\ncompromise (smallest iae sum on the final front):");
        let _ = writeln!(s, "  genes: {}", csvfmt::row(self.compromise.genes.iter().copied()));
        let _ = writeln!(s, "  iae:   {}", csvfmt::row(self.compromise.objectives.iter().copied()));
        let _ = writeln!(s, "\nbest iae per generation:");
        for (g, best) in self.best_history().iter().enumerate() {
            let _ = writeln!(s, "  {g:>4} {}", fmt_joints(best));
        }
        s
    }
}

impl fmt::Display for TuneReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())?;
        writeln!(f, "\nelapsed: {:.4} s", self.elapsed.as_secs_f64())
    }
}

fn problem_for(cfg: &RunConfig) -> Result<GainTuningProblem> {
    Ok(GainTuningProblem::new(
        cfg.load_model()?,
        cfg.trajectory,
        cfg.simulation,
        cfg.optimizer.initial_offset,
    ))
}

/// Runs the optimizer and writes `archive.csv`, `front.csv`, `initial.csv`,
/// `summary.txt` and, with `per_joint`, the tracking files of the compromise gains.
pub fn run_tune(cfg: &RunConfig, out_dir: &Path, per_joint: bool) -> Result<TuneReport> {
    let problem = problem_for(cfg)?;
    let o = &cfg.optimizer;
    let evolve_cfg = EvolveConfig {
        population_size: o.population,
        generations: o.generations,
        bounds: o.bounds.clone(),
        operators: o.operators,
        seed: o.seed,
        parallel: o.parallel,
        sentinel: crate::control::DIVERGED_IAE,
    };

    let start = Instant::now();
    let result = evolve(&problem, &evolve_cfg)?;
    let elapsed = start.elapsed();

    let compromise = result
        .final_front()
        .into_iter()
        .min_by(|a, b| {
            let sa: f64 = a.objectives.iter().sum();
            let sb: f64 = b.objectives.iter().sum();
            sa.total_cmp(&sb)
        })
        .expect("front is nonempty")
        .clone();

    ensure_dir(out_dir)?;
    let cols = gain_columns();
    let mut files = Vec::new();

    let path = out_dir.join("archive.csv");
    write_file(&path, |w| write_archive_csv(w, &cols, &result.archive))?;
    files.push(path);

    let path = out_dir.join("front.csv");
    write_file(&path, |w| {
        write_front_csv(w, &cols, result.archive.last().expect("nonempty"))
    })?;
    files.push(path);

    let path = out_dir.join("initial.csv");
    let initial = GenerationRecord {
        generation: 0,
        population: result.initial.clone(),
    };
    write_file(&path, |w| write_archive_csv(w, &cols, std::slice::from_ref(&initial)))?;
    files.push(path);

    if per_joint {
        let chromosome = Chromosome::from_slice(&compromise.genes)?;
        let run = problem.run(&chromosome)?;
        files.extend(write_tracking(out_dir, &run, true)?);
    }

    let mut report = TuneReport {
        family: o.operators.family,
        seed: o.seed,
        result,
        elapsed,
        compromise,
        files: vec![],
    };
    let path = out_dir.join("summary.txt");
    let text = report.summary();
    write_file(&path, |w| w.write_all(text.as_bytes()))?;
    files.push(path);
    report.files = files;
    Ok(report)
}

/// Side-by-side outcome of the two operator families on one configuration.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub runs: Vec<TuneReport>,
    pub files: Vec<PathBuf>,
}

impl CompareReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let names: Vec<&str> = self.runs.iter().map(|r| r.family.name()).collect();
        let _ = writeln!(s, "objective,{}", names.join(","));
        let bests: Vec<JointVector> = self.runs.iter().map(TuneReport::final_best).collect();
        for j in 0..NUM_JOINTS {
            let _ = writeln!(
                s,
                "iae_{},{}",
                j + 1,
                csvfmt::row(bests.iter().map(|b| b[j]))
            );
        }
        let _ = writeln!(
            s,
            "iae_sum,{}",
            csvfmt::row(bests.iter().map(|b| b.iter().sum::<f64>()))
        );
        s
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>16} {:>16}", "objective", self.runs[0].family.name(), self.runs[1].family.name())?;
        let a = self.runs[0].final_best();
        let b = self.runs[1].final_best();
        for j in 0..NUM_JOINTS {
            writeln!(f, "{:<10} {:>16.6} {:>16.6}", format!("iae_{}", j + 1), a[j], b[j])?;
        }
        writeln!(
            f,
            "{:<10} {:>16.6} {:>16.6}",
            "iae_sum",
            a.iter().sum::<f64>(),
            b.iter().sum::<f64>()
        )?;
        for r in &self.runs {
            writeln!(f, "elapsed ({}): {:.4} s", r.family.name(), r.elapsed.as_secs_f64())?;
        }
        Ok(())
    }
}

/// Runs `tune` once per operator family with identical settings and seed, each in
/// its own subdirectory, and writes `comparison.csv`.
pub fn run_compare(cfg: &RunConfig, out_dir: &Path) -> Result<CompareReport> {
    let mut runs = Vec::new();
    let mut files = Vec::new();
    for family in [OperatorFamily::RealValued, OperatorFamily::SbxPolynomial] {
        let mut c = cfg.clone();
        c.optimizer.operators.family = family;
        let report = run_tune(&c, &out_dir.join(family.name()), false)?;
        files.extend(report.files.iter().cloned());
        runs.push(report);
    }
    let report = CompareReport { runs, files };
    let path = out_dir.join("comparison.csv");
    let table = report.table();
    write_file(&path, |w| w.write_all(table.as_bytes()))?;
    let mut report = report;
    report.files.push(path);
    Ok(report)
}
