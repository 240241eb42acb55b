//! Run configuration file.
//!
//! A single TOML file drives both commands. Every section is optional; omitted
//! values fall back to the defaults below, which reproduce the reference
//! experiment (reference gains, −20/60/−120/0/−30/0° to 20/−60/−60/0/30/0° in 1 s,
//! 0.01 s sampling).
//!
//! ```toml
//! robot = "puma560.toml"          # optional; relative to this file. Bundled PUMA 560 if absent.
//!
//! [trajectory]
//! initial_deg = [-20, 60, -120, 0, -30, 0]
//! final_deg = [20, -60, -60, 0, 30, 0]
//! duration = 1.0                  # s
//!
//! [simulation]
//! dt_control = 0.01               # s, sampling of logs and IAE
//! dt_integration = 0.001          # s, RK4 step
//! torque_hold = "continuous"      # or "zero-order"
//! initial_offset_rad = 0.0        # scalar or 6 values, added to the initial pose
//!
//! [gains]                         # used by `simulate`
//! kp = [700, 1100, 400, 40, 30, 40]
//! kd = [20, 20, 20, 5, 5, 5]
//!
//! [optimizer]                     # used by `tune`
//! population = 40
//! generations = 30
//! seed = 1
//! operators = "real-valued"       # or "sbx-polynomial"
//! crossover_probability = 0.9
//! mutation_probability = 0.08333333333333333
//! recombination_spread = 0.25
//! mutation_range = 0.1
//! mutation_precision = 16
//! sbx_eta = 20
//! pm_eta = 20
//! lower = 0.0                     # scalar or 12 values, order kp1..kp6 kd1..kd6
//! upper = 100.0
//! initial_offset_rad = 0.05
//! parallel = true
//!
//! [output]
//! dir = "out"                     # relative to the working directory
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::control::{GainSet, SimConfig, TorqueHold};
use crate::error::{Error, Result};
use crate::joint::{JointVector, NUM_JOINTS};
use crate::moea::{Bounds, OperatorConfig, OperatorFamily};
use crate::robot::RobotModel;
use crate::trajectory::TrajectorySpec;

use super::chromosome::NUM_GENES;

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    robot: Option<PathBuf>,
    #[serde(default)]
    trajectory: RawTrajectory,
    #[serde(default)]
    simulation: RawSimulation,
    #[serde(default)]
    gains: RawGains,
    #[serde(default)]
    optimizer: RawOptimizer,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawTrajectory {
    initial_deg: Vec<f64>,
    final_deg: Vec<f64>,
    duration: f64,
}

impl Default for RawTrajectory {
    fn default() -> Self {
        RawTrajectory {
            initial_deg: vec![-20.0, 60.0, -120.0, 0.0, -30.0, 0.0],
            final_deg: vec![20.0, -60.0, -60.0, 0.0, 30.0, 0.0],
            duration: 1.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ScalarOrList {
    Scalar(f64),
    List(Vec<f64>),
}

impl ScalarOrList {
    fn expand(&self, n: usize) -> Option<Vec<f64>> {
        match self {
            ScalarOrList::Scalar(x) => Some(vec![*x; n]),
            ScalarOrList::List(v) if v.len() == n => Some(v.clone()),
            ScalarOrList::List(_) => None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawSimulation {
    dt_control: f64,
    dt_integration: f64,
    torque_hold: String,
    initial_offset_rad: ScalarOrList,
}

impl Default for RawSimulation {
    fn default() -> Self {
        RawSimulation {
            dt_control: 0.01,
            dt_integration: 0.001,
            torque_hold: "continuous".into(),
            initial_offset_rad: ScalarOrList::Scalar(0.0),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawGains {
    kp: Vec<f64>,
    kd: Vec<f64>,
}

impl Default for RawGains {
    fn default() -> Self {
        let t = GainSet::reference();
        RawGains {
            kp: t.kp.0.to_vec(),
            kd: t.kd.0.to_vec(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOptimizer {
    population: usize,
    generations: usize,
    seed: u64,
    operators: String,
    crossover_probability: f64,
    mutation_probability: f64,
    recombination_spread: f64,
    mutation_range: f64,
    mutation_precision: f64,
    sbx_eta: f64,
    pm_eta: f64,
    lower: ScalarOrList,
    upper: ScalarOrList,
    initial_offset_rad: ScalarOrList,
    parallel: bool,
}

impl Default for RawOptimizer {
    fn default() -> Self {
        let ops = OperatorConfig::default();
        RawOptimizer {
            population: 40,
            generations: 30,
            seed: 1,
            operators: ops.family.name().into(),
            crossover_probability: ops.crossover_probability,
            mutation_probability: ops.mutation_probability,
            recombination_spread: ops.spread,
            mutation_range: ops.mutation_range,
            mutation_precision: ops.mutation_precision,
            sbx_eta: ops.sbx_eta,
            pm_eta: ops.pm_eta,
            lower: ScalarOrList::Scalar(0.0),
            upper: ScalarOrList::Scalar(100.0),
            initial_offset_rad: ScalarOrList::Scalar(0.05),
            parallel: true,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOutput {
    dir: PathBuf,
}

impl Default for RawOutput {
    fn default() -> Self {
        RawOutput { dir: "out".into() }
    }
}

/// Optimizer settings for `tune`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerSettings {
    pub population: usize,
    pub generations: usize,
    pub seed: u64,
    pub operators: OperatorConfig,
    pub bounds: Bounds,
    /// Initial position offset from the trajectory start during tuning, rad.
    pub initial_offset: JointVector,
    pub parallel: bool,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// File the configuration was read from (for messages).
    pub source: PathBuf,
    /// Robot parameter file; `None` selects the bundled PUMA 560.
    pub robot: Option<PathBuf>,
    pub trajectory: TrajectorySpec,
    pub simulation: SimConfig,
    /// Initial position offset from the trajectory start for `simulate`, rad.
    pub initial_offset: JointVector,
    pub gains: GainSet,
    pub optimizer: OptimizerSettings,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::from_toml_str("", Path::new("<defaults>")).expect("defaults are valid")
    }
}

impl RunConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text, path)?;
        if let Some(robot) = &cfg.robot {
            if robot.is_relative() {
                let base = path.parent().unwrap_or(Path::new(""));
                cfg.robot = Some(base.join(robot));
            }
        }
        Ok(cfg)
    }

    pub fn from_toml_str(text: &str, source: &Path) -> Result<Self> {
        let err = |field: &str, message: String| Error::Config {
            file: source.to_path_buf(),
            field: field.to_string(),
            message,
        };
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            err(
                "<document>",
                e.to_string().lines().collect::<Vec<_>>().join(" "),
            )
        })?;

        let joints = |field: &str, v: &[f64]| -> Result<JointVector> {
            let jv = JointVector::from_slice(v)
                .map_err(|_| err(field, format!("expected {NUM_JOINTS} values, got {}", v.len())))?;
            jv.ensure_finite(field).map_err(|e| err(field, e.to_string()))?;
            Ok(jv)
        };
        let expand = |field: &str, v: &ScalarOrList, n: usize| -> Result<Vec<f64>> {
            v.expand(n)
                .ok_or_else(|| err(field, format!("expected a number or a list of {n} numbers")))
        };

        let t = &raw.trajectory;
        if !(t.duration.is_finite() && t.duration > 0.0) {
            return Err(err(
                "trajectory.duration",
                format!("must be positive, got {}", t.duration),
            ));
        }
        let trajectory = TrajectorySpec::new(
            joints("trajectory.initial_deg", &t.initial_deg)?.map(f64::to_radians),
            joints("trajectory.final_deg", &t.final_deg)?.map(f64::to_radians),
            t.duration,
        )
        .map_err(|e| err("trajectory", e.to_string()))?;

        let s = &raw.simulation;
        let hold = match s.torque_hold.as_str() {
            "continuous" => TorqueHold::Continuous,
            "zero-order" => TorqueHold::ZeroOrder,
            other => {
                return Err(err(
                    "simulation.torque_hold",
                    format!("expected 'continuous' or 'zero-order', got '{other}'"),
                ))
            }
        };
        let simulation = SimConfig {
            dt_control: s.dt_control,
            dt_integration: s.dt_integration,
            hold,
        };
        if !(s.dt_control > 0.0) {
            return Err(err("simulation.dt_control", format!("must be positive, got {}", s.dt_control)));
        }
        if !(s.dt_integration > 0.0) {
            return Err(err(
                "simulation.dt_integration",
                format!("must be positive, got {}", s.dt_integration),
            ));
        }
        simulation
            .steps(trajectory.duration)
            .map_err(|e| err("simulation", e.to_string()))?;
        let initial_offset = joints(
            "simulation.initial_offset_rad",
            &expand("simulation.initial_offset_rad", &s.initial_offset_rad, NUM_JOINTS)?,
        )?;

        let gains = GainSet {
            kp: joints("gains.kp", &raw.gains.kp)?,
            kd: joints("gains.kd", &raw.gains.kd)?,
        };
        gains.validate().map_err(|e| err("gains", e.to_string()))?;

        let o = &raw.optimizer;
        if o.population < 2 || !o.population.is_multiple_of(2) {
            return Err(err(
                "optimizer.population",
                format!("must be even and at least 2, got {}", o.population),
            ));
        }
        if o.generations < 1 {
            return Err(err("optimizer.generations", "must be at least 1".into()));
        }
        let family: OperatorFamily = o
            .operators
            .parse()
            .map_err(|e: Error| err("optimizer.operators", e.to_string()))?;
        let operators = OperatorConfig {
            crossover_probability: o.crossover_probability,
            mutation_probability: o.mutation_probability,
            family,
            spread: o.recombination_spread,
            mutation_range: o.mutation_range,
            mutation_precision: o.mutation_precision,
            sbx_eta: o.sbx_eta,
            pm_eta: o.pm_eta,
        };
        operators
            .validate()
            .map_err(|e| err("optimizer", e.to_string()))?;
        let lower = expand("optimizer.lower", &o.lower, NUM_GENES)?;
        let upper = expand("optimizer.upper", &o.upper, NUM_GENES)?;
        if lower.iter().any(|l| *l < 0.0) {
            return Err(err("optimizer.lower", "gain bounds must be nonnegative".into()));
        }
        let bounds = Bounds::new(lower, upper).map_err(|e| err("optimizer.upper", e.to_string()))?;
        let tune_offset = joints(
            "optimizer.initial_offset_rad",
            &expand("optimizer.initial_offset_rad", &o.initial_offset_rad, NUM_JOINTS)?,
        )?;

        Ok(RunConfig {
            source: source.to_path_buf(),
            robot: raw.robot,
            trajectory,
            simulation,
            initial_offset,
            gains,
            optimizer: OptimizerSettings {
                population: o.population,
                generations: o.generations,
                seed: o.seed,
                operators,
                bounds,
                initial_offset: tune_offset,
                parallel: o.parallel,
            },
            output_dir: raw.output.dir,
        })
    }

    pub fn load_model(&self) -> Result<RobotModel> {
        match &self.robot {
            Some(path) => RobotModel::from_file(path),
            None => Ok(RobotModel::puma560()),
        }
    }
}
