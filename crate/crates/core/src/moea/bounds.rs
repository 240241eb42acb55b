use rand::Rng;

use crate::error::{Error, Result};

/// Per-gene box constraints `lower[i] ≤ x[i] ≤ upper[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::invalid(format!(
                "bounds need matching, nonempty lower/upper vectors (got {} and {})",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::invalid(format!(
                    "gene {}: lower bound {l} must be finite and below upper bound {u}",
                    i + 1
                )));
            }
        }
        Ok(Bounds { lower, upper })
    }

    /// The same interval for each of `n` genes.
    pub fn uniform(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; n], vec![upper; n])
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn clamp(&self, i: usize, x: f64) -> f64 {
        x.clamp(self.lower[i], self.upper[i])
    }

    pub fn contains(&self, genes: &[f64]) -> bool {
        genes.len() == self.len()
            && genes
                .iter()
                .enumerate()
                .all(|(i, g)| (self.lower[i]..=self.upper[i]).contains(g))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.lower[i] + rng.random::<f64>() * self.width(i))
            .collect()
    }
}
