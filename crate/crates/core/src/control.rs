//! Computed-torque control loop and tracking score.
//!
//! The controller applies `τ = A(q)·τ′ + h(q, q̇)` with the auxiliary control
//! `τ′ = q̈_d + K_d(q̇_d − q̇) + K_p(q_d − q)`. With an exact plant model every
//! joint error then obeys `ë + k_d ė + k_p e = 0`.

use std::io::{self, Write};

use crate::csvfmt;
use crate::dynamics::{forward_dynamics, inverse_dynamics};
use crate::error::{Error, Result};
use crate::integrate::{rk4_step, ArmState};
use crate::joint::{JointVector, NUM_JOINTS};
use crate::robot::RobotModel;
use crate::trajectory::{DesiredState, TrajectorySpec};

/// IAE reported for every joint when a run diverges.
pub const DIVERGED_IAE: f64 = 1e9;

/// States larger than this (rad or rad/s) are treated as divergence.
const STATE_LIMIT: f64 = 1e6;

/// Diagonal PD gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSet {
    /// Position gains, 1/s².
    pub kp: JointVector,
    /// Velocity gains, 1/s.
    pub kd: JointVector,
}

impl GainSet {
    pub fn new(kp: JointVector, kd: JointVector) -> Result<Self> {
        let g = GainSet { kp, kd };
        g.validate()?;
        Ok(g)
    }

    /// Empirical gains `k_p = (700, 1100, 400, 40, 30, 40)`, `k_d = (20, 20, 20, 5, 5, 5)`.
    pub fn reference() -> Self {
        GainSet {
            kp: JointVector::new([700.0, 1100.0, 400.0, 40.0, 30.0, 40.0]),
            kd: JointVector::new([20.0, 20.0, 20.0, 5.0, 5.0, 5.0]),
        }
    }

    pub fn zero() -> Self {
        GainSet {
            kp: JointVector::zeros(),
            kd: JointVector::zeros(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("kp", &self.kp), ("kd", &self.kd)] {
            if v.iter().any(|g| !g.is_finite() || *g < 0.0) {
                return Err(Error::invalid(format!(
                    "{name} gains must be finite and nonnegative, got {v:?}"
                )));
            }
        }
        Ok(())
    }

    /// Auxiliary control `τ′`.
    pub fn auxiliary(&self, q: &JointVector, qd: &JointVector, desired: &DesiredState) -> JointVector {
        desired.qdd + self.kd.component_mul(desired.qd - *qd) + self.kp.component_mul(desired.q - *q)
    }
}

/// Computed-torque law: `inverse_dynamics(q, q̇, τ′)`.
pub fn control_torque(
    model: &RobotModel,
    gains: &GainSet,
    q: &JointVector,
    qd: &JointVector,
    desired: &DesiredState,
) -> Result<JointVector> {
    desired.q.ensure_finite("desired position")?;
    desired.qd.ensure_finite("desired velocity")?;
    desired.qdd.ensure_finite("desired acceleration")?;
    let aux = gains.auxiliary(q, qd, desired);
    inverse_dynamics(model, q, qd, &aux)
}

/// Per-joint sum of absolute errors over all samples.
pub fn iae(errors: &[JointVector]) -> Result<JointVector> {
    if errors.is_empty() {
        return Err(Error::invalid("IAE needs at least one error sample"));
    }
    let mut acc = JointVector::zeros();
    for e in errors {
        e.ensure_finite("error sample")?;
        acc += e.abs();
    }
    Ok(acc)
}

/// When the control torque is recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TorqueHold {
    /// The law is evaluated at every integrator stage.
    #[default]
    Continuous,
    /// The torque is computed at each control instant and held until the next.
    ZeroOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Sampling period of the logged signals and the IAE, s.
    pub dt_control: f64,
    /// RK4 step, s. Must divide `dt_control`.
    pub dt_integration: f64,
    pub hold: TorqueHold,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt_control: 0.01,
            dt_integration: 0.001,
            hold: TorqueHold::Continuous,
        }
    }
}

fn divides(whole: f64, step: f64, what: &str) -> Result<usize> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::invalid(format!("{what} must be positive, got {step}")));
    }
    let n = (whole / step).round();
    if n < 1.0 || (n * step - whole).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "{what} = {step} does not divide {whole} into a whole number of steps"
        )));
    }
    Ok(n as usize)
}

impl SimConfig {
    /// Number of control intervals and RK4 substeps per interval for a run of `duration` seconds.
    pub fn steps(&self, duration: f64) -> Result<(usize, usize)> {
        let intervals = divides(duration, self.dt_control, "dt_control")?;
        let substeps = divides(self.dt_control, self.dt_integration, "dt_integration")?;
        Ok((intervals, substeps))
    }
}

/// Logged closed-loop run, one entry per control instant.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub time: Vec<f64>,
    pub q: Vec<JointVector>,
    pub qd: Vec<JointVector>,
    pub q_desired: Vec<JointVector>,
    pub qd_desired: Vec<JointVector>,
    pub torque: Vec<JointVector>,
    /// Sum of `|q_d − q|` over the logged samples, rad·samples.
    pub iae: JointVector,
    pub diverged: bool,
}

impl SimResult {
    fn with_capacity(n: usize) -> Self {
        SimResult {
            time: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            qd: Vec::with_capacity(n),
            q_desired: Vec::with_capacity(n),
            qd_desired: Vec::with_capacity(n),
            torque: Vec::with_capacity(n),
            iae: JointVector::zeros(),
            diverged: false,
        }
    }

    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    /// Position errors `q_d − q` per sample.
    pub fn errors(&self) -> Vec<JointVector> {
        self.q_desired
            .iter()
            .zip(&self.q)
            .map(|(d, q)| *d - *q)
            .collect()
    }

    pub fn max_abs_error(&self) -> JointVector {
        self.errors()
            .iter()
            .fold(JointVector::zeros(), |m, e| m.zip_map(e.abs(), f64::max))
    }

    pub fn final_abs_error(&self) -> JointVector {
        self.errors().last().map(|e| e.abs()).unwrap_or_default()
    }

    /// Writes every logged sample: time, desired and actual positions, desired and
    /// actual velocities, torques.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut header = vec!["t".to_string()];
        for prefix in ["q_des", "q", "qd_des", "qd", "tau"] {
            header.extend((1..=NUM_JOINTS).map(|j| format!("{prefix}_{j}")));
        }
        writeln!(out, "{}", header.join(","))?;
        for k in 0..self.len() {
            let values = std::iter::once(self.time[k])
                .chain(self.q_desired[k].iter().copied())
                .chain(self.q[k].iter().copied())
                .chain(self.qd_desired[k].iter().copied())
                .chain(self.qd[k].iter().copied())
                .chain(self.torque[k].iter().copied());
            writeln!(out, "{}", csvfmt::row(values))?;
        }
        Ok(())
    }

    /// Desired-versus-actual data for one joint (0-based), ready for plotting.
    pub fn write_joint_csv<W: Write>(&self, joint: usize, mut out: W) -> io::Result<()> {
        writeln!(out, "t,q_des,q,qd_des,qd,error")?;
        for k in 0..self.len() {
            let (qd, q) = (self.q_desired[k][joint], self.q[k][joint]);
            writeln!(
                out,
                "{}",
                csvfmt::row([
                    self.time[k],
                    qd,
                    q,
                    self.qd_desired[k][joint],
                    self.qd[k][joint],
                    qd - q,
                ])
            )?;
        }
        Ok(())
    }
}

/// Runs the computed-torque loop along `spec` from `initial`.
///
/// Divergence (non-finite state, singular mass matrix, or |state| above 1e6) stops
/// the run early with `diverged` set and every IAE entry at [`DIVERGED_IAE`].
pub fn simulate(
    model: &RobotModel,
    gains: &GainSet,
    spec: &TrajectorySpec,
    config: &SimConfig,
    initial: ArmState,
) -> Result<SimResult> {
    gains.validate()?;
    initial.q.ensure_finite("initial position")?;
    initial.qd.ensure_finite("initial velocity")?;
    let (intervals, substeps) = config.steps(spec.duration)?;
    let h = config.dt_control / substeps as f64;
    let duration = spec.duration;
    let desired_at = |t: f64| spec.desired_state(t.clamp(0.0, duration));

    let mut log = SimResult::with_capacity(intervals + 1);
    let mut state = initial;

    for k in 0..=intervals {
        let t = duration * (k as f64 / intervals as f64);
        let desired = desired_at(t)?;
        let tau = match control_torque(model, gains, &state.q, &state.qd, &desired) {
            Ok(tau) if tau.is_finite() => tau,
            _ => return Ok(diverge(log)),
        };
        log.time.push(t);
        log.q.push(state.q);
        log.qd.push(state.qd);
        log.q_desired.push(desired.q);
        log.qd_desired.push(desired.qd);
        log.torque.push(tau);

        if k == intervals {
            break;
        }
        for m in 0..substeps {
            let ts = t + m as f64 * h;
            let step = match config.hold {
                TorqueHold::Continuous => rk4_step(&state, ts, h, |tt, q, qd| {
                    let d = desired_at(tt)?;
                    let tau = control_torque(model, gains, q, qd, &d)?;
                    forward_dynamics(model, q, qd, &tau)
                }),
                TorqueHold::ZeroOrder => {
                    rk4_step(&state, ts, h, |_, q, qd| forward_dynamics(model, q, qd, &tau))
                }
            };
            match step {
                Ok(next) if next.is_finite() && within_limits(&next) => state = next,
                _ => return Ok(diverge(log)),
            }
        }
    }

    log.iae = iae(&log.errors())?;
    Ok(log)
}

fn within_limits(s: &ArmState) -> bool {
    s.q.norm_inf() < STATE_LIMIT && s.qd.norm_inf() < STATE_LIMIT
}

fn diverge(mut log: SimResult) -> SimResult {
    log.diverged = true;
    log.iae = JointVector::splat(DIVERGED_IAE);
    log
}
