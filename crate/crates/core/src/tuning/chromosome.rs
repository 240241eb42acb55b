use crate::control::GainSet;
use crate::error::{Error, Result};
use crate::joint::{JointVector, NUM_JOINTS};
use crate::moea::Bounds;

/// Genes per chromosome: six position gains followed by six velocity gains.
pub const NUM_GENES: usize = 2 * NUM_JOINTS;

/// `[kp1 … kp6 kd1 … kd6]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chromosome(pub [f64; NUM_GENES]);

impl Chromosome {
    pub fn from_slice(genes: &[f64]) -> Result<Self> {
        let arr: [f64; NUM_GENES] = genes.try_into().map_err(|_| {
            Error::invalid(format!("a chromosome has {NUM_GENES} genes, got {}", genes.len()))
        })?;
        Ok(Chromosome(arr))
    }

    pub fn encode(gains: &GainSet) -> Self {
        let mut genes = [0.0; NUM_GENES];
        genes[..NUM_JOINTS].copy_from_slice(gains.kp.as_array());
        genes[NUM_JOINTS..].copy_from_slice(gains.kd.as_array());
        Chromosome(genes)
    }

    pub fn decode(&self) -> GainSet {
        let (kp, kd) = self.0.split_at(NUM_JOINTS);
        GainSet {
            kp: JointVector::from_slice(kp).expect("six genes"),
            kd: JointVector::from_slice(kd).expect("six genes"),
        }
    }

    pub fn within(&self, bounds: &Bounds) -> bool {
        bounds.contains(&self.0)
    }
}
