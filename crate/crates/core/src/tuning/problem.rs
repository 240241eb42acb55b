use crate::control::{simulate, SimConfig, SimResult};
use crate::error::Result;
use crate::integrate::ArmState;
use crate::joint::{JointVector, NUM_JOINTS};
use crate::moea::Problem;
use crate::robot::RobotModel;
use crate::trajectory::TrajectorySpec;

use super::chromosome::{Chromosome, NUM_GENES};

/// Six objectives: the per-joint IAE of the closed loop under the decoded gains.
#[derive(Debug, Clone)]
pub struct GainTuningProblem {
    pub model: RobotModel,
    pub trajectory: TrajectorySpec,
    pub simulation: SimConfig,
    /// Start state of every run.
    pub initial: ArmState,
}

impl GainTuningProblem {
    /// Runs start at rest, displaced by `offset` from the trajectory's initial pose.
    pub fn new(
        model: RobotModel,
        trajectory: TrajectorySpec,
        simulation: SimConfig,
        offset: JointVector,
    ) -> Self {
        let initial = ArmState {
            q: trajectory.q_initial + offset,
            qd: JointVector::zeros(),
        };
        GainTuningProblem {
            model,
            trajectory,
            simulation,
            initial,
        }
    }

    pub fn run(&self, chromosome: &Chromosome) -> Result<SimResult> {
        simulate(
            &self.model,
            &chromosome.decode(),
            &self.trajectory,
            &self.simulation,
            self.initial,
        )
    }

    /// Per-joint IAE; a diverged run scores the sentinel on every joint.
    pub fn evaluate_chromosome(&self, chromosome: &Chromosome) -> Result<JointVector> {
        Ok(self.run(chromosome)?.iae)
    }
}

impl Problem for GainTuningProblem {
    fn num_variables(&self) -> usize {
        NUM_GENES
    }

    fn num_objectives(&self) -> usize {
        NUM_JOINTS
    }

    fn evaluate(&self, genes: &[f64]) -> Result<Vec<f64>> {
        let c = Chromosome::from_slice(genes)?;
        Ok(self.evaluate_chromosome(&c)?.0.to_vec())
    }
}
