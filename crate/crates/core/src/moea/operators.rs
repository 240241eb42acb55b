//! Variation operators.
//!
//! Two families share one configuration:
//!
//! * real-valued: intermediate recombination (`child = p1 + α(p2 − p1)` with a
//!   per-gene `α ∈ [−d, 1 + d]`) and breeder-style mutation
//!   (`x ± r·range·2^(−u·k)`);
//! * SBX crossover with polynomial mutation, both in their bounded form.
//!
//! Every child gene is clamped back into its bounds.

use rand::Rng;

use super::bounds::Bounds;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OperatorFamily {
    #[default]
    RealValued,
    SbxPolynomial,
}

impl OperatorFamily {
    pub fn name(self) -> &'static str {
        match self {
            OperatorFamily::RealValued => "real-valued",
            OperatorFamily::SbxPolynomial => "sbx-polynomial",
        }
    }
}

impl std::str::FromStr for OperatorFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real-valued" => Ok(OperatorFamily::RealValued),
            "sbx-polynomial" => Ok(OperatorFamily::SbxPolynomial),
            other => Err(Error::invalid(format!(
                "unknown operator family '{other}' (expected 'real-valued' or 'sbx-polynomial')"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorConfig {
    /// Probability that a parent pair is recombined.
    pub crossover_probability: f64,
    /// Per-gene mutation probability.
    pub mutation_probability: f64,
    pub family: OperatorFamily,
    /// Recombination spread `d`.
    pub spread: f64,
    /// Mutation range fraction `r`.
    pub mutation_range: f64,
    /// Mutation precision `k`.
    pub mutation_precision: f64,
    /// SBX distribution index.
    pub sbx_eta: f64,
    /// Polynomial mutation distribution index.
    pub pm_eta: f64,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        OperatorConfig {
            crossover_probability: 0.9,
            mutation_probability: 1.0 / 12.0,
            family: OperatorFamily::RealValued,
            spread: 0.25,
            mutation_range: 0.1,
            mutation_precision: 16.0,
            sbx_eta: 20.0,
            pm_eta: 20.0,
        }
    }
}

impl OperatorConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("crossover_probability", self.crossover_probability),
            ("mutation_probability", self.mutation_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        for (name, v) in [
            ("spread", self.spread),
            ("mutation_range", self.mutation_range),
            ("mutation_precision", self.mutation_precision),
            ("sbx_eta", self.sbx_eta),
            ("pm_eta", self.pm_eta),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Produces two children from two parents with the configured family.
    pub(crate) fn vary<R: Rng + ?Sized>(
        &self,
        p1: &[f64],
        p2: &[f64],
        bounds: &Bounds,
        rng: &mut R,
    ) -> (Vec<f64>, Vec<f64>) {
        let (mut c1, mut c2) = match self.family {
            OperatorFamily::RealValued => recombine_real(p1, p2, bounds, self, rng),
            OperatorFamily::SbxPolynomial => recombine_sbx(p1, p2, bounds, self, rng),
        };
        for child in [&mut c1, &mut c2] {
            match self.family {
                OperatorFamily::RealValued => mutate_real(child, bounds, self, rng),
                OperatorFamily::SbxPolynomial => mutate_polynomial(child, bounds, self, rng),
            }
        }
        (c1, c2)
    }
}

/// Intermediate recombination with per-gene weights `α ∈ [−d, 1 + d]`.
pub fn recombine_real<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    bounds: &Bounds,
    config: &OperatorConfig,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    if rng.random::<f64>() >= config.crossover_probability {
        return (p1.to_vec(), p2.to_vec());
    }
    let d = config.spread;
    let child = |rng: &mut R| -> Vec<f64> {
        p1.iter()
            .zip(p2)
            .enumerate()
            .map(|(i, (a, b))| {
                let alpha = -d + (1.0 + 2.0 * d) * rng.random::<f64>();
                bounds.clamp(i, a + alpha * (b - a))
            })
            .collect()
    };
    let c1 = child(rng);
    let c2 = child(rng);
    (c1, c2)
}

/// Breeder mutation: each gene, with probability `p_m`, moves by
/// `± r·(upper − lower)·2^(−u·k)` with `u ~ U[0, 1]`.
pub fn mutate_real<R: Rng + ?Sized>(
    genes: &mut [f64],
    bounds: &Bounds,
    config: &OperatorConfig,
    rng: &mut R,
) {
    for (i, g) in genes.iter_mut().enumerate() {
        if rng.random::<f64>() >= config.mutation_probability {
            continue;
        }
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let u: f64 = rng.random();
        let step = config.mutation_range * bounds.width(i) * (-u * config.mutation_precision).exp2();
        *g = bounds.clamp(i, *g + sign * step);
    }
}

/// Simulated binary crossover, bounded variant.
pub fn recombine_sbx<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    bounds: &Bounds,
    config: &OperatorConfig,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.random::<f64>() >= config.crossover_probability {
        return (c1, c2);
    }
    let eta = config.sbx_eta;
    for i in 0..p1.len() {
        if rng.random::<f64>() > 0.5 || (p1[i] - p2[i]).abs() <= 1e-14 {
            continue;
        }
        let (y1, y2) = if p1[i] < p2[i] { (p1[i], p2[i]) } else { (p2[i], p1[i]) };
        let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
        let u: f64 = rng.random();
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let betaq = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
        let a = 0.5 * ((y1 + y2) - betaq * (y2 - y1));
        let betaq = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
        let b = 0.5 * ((y1 + y2) + betaq * (y2 - y1));
        let (a, b) = (bounds.clamp(i, a), bounds.clamp(i, b));
        if rng.random::<bool>() {
            c1[i] = b;
            c2[i] = a;
        } else {
            c1[i] = a;
            c2[i] = b;
        }
    }
    (c1, c2)
}

/// Polynomial mutation, bounded variant.
pub fn mutate_polynomial<R: Rng + ?Sized>(
    genes: &mut [f64],
    bounds: &Bounds,
    config: &OperatorConfig,
    rng: &mut R,
) {
    let eta = config.pm_eta;
    let power = 1.0 / (eta + 1.0);
    for (i, g) in genes.iter_mut().enumerate() {
        if rng.random::<f64>() >= config.mutation_probability {
            continue;
        }
        let (lo, width) = (bounds.lower()[i], bounds.width(i));
        let delta1 = (*g - lo) / width;
        let delta2 = (bounds.upper()[i] - *g) / width;
        let u: f64 = rng.random();
        let deltaq = if u <= 0.5 {
            let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - delta1).powf(eta + 1.0);
            v.powf(power) - 1.0
        } else {
            let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - delta2).powf(eta + 1.0);
            1.0 - v.powf(power)
        };
        *g = bounds.clamp(i, *g + deltaq * width);
    }
}
