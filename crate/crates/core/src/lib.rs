//! Computed-torque control of a six-joint PUMA 560 arm, with PD gains tuned by an
//! elitist non-dominated sorting genetic algorithm.
//!
//! The crate is organised bottom-up:
//!
//! * [`robot`] loads kinematic and inertial parameters from a TOML data file.
//! * [`dynamics`] evaluates inverse and forward rigid-body dynamics with a recursive
//!   Newton–Euler pass.
//! * [`trajectory`] produces quintic joint-space reference motions.
//! * [`control`] closes the loop: computed-torque law, fixed-step RK4 plant, IAE scoring.
//! * [`moea`] is a problem-agnostic NSGA-II core with real-valued and SBX/polynomial
//!   variation operators.
//! * [`tuning`] binds the optimizer to the controller and implements the `simulate`,
//!   `tune` and `compare` commands.

pub mod control;
pub mod csvfmt;
pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod joint;
pub mod moea;
pub mod robot;
pub mod trajectory;
pub mod tuning;

pub use control::{GainSet, SimConfig, SimResult, TorqueHold};
pub use error::{Error, Result};
pub use joint::{JointVector, NUM_JOINTS};
pub use robot::RobotModel;
pub use trajectory::{DesiredState, TrajectorySpec};
