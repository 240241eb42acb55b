//! Fixed-step classical Runge–Kutta integration of the arm state.

use crate::error::Result;
use crate::joint::JointVector;

/// Joint positions and velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmState {
    pub q: JointVector,
    pub qd: JointVector,
}

impl ArmState {
    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.qd.is_finite()
    }
}

/// One RK4 step of `q̈ = accel(t, q, q̇)`.
pub fn rk4_step<F>(state: &ArmState, t: f64, h: f64, mut accel: F) -> Result<ArmState>
where
    F: FnMut(f64, &JointVector, &JointVector) -> Result<JointVector>,
{
    let ArmState { q, qd } = *state;

    let k1v = qd;
    let k1a = accel(t, &q, &qd)?;

    let q2 = q + k1v * (0.5 * h);
    let v2 = qd + k1a * (0.5 * h);
    let k2v = v2;
    let k2a = accel(t + 0.5 * h, &q2, &v2)?;

    let q3 = q + k2v * (0.5 * h);
    let v3 = qd + k2a * (0.5 * h);
    let k3v = v3;
    let k3a = accel(t + 0.5 * h, &q3, &v3)?;

    let q4 = q + k3v * h;
    let v4 = qd + k3a * h;
    let k4v = v4;
    let k4a = accel(t + h, &q4, &v4)?;

    let sixth = h / 6.0;
    Ok(ArmState {
        q: q + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * sixth,
        qd: qd + (k1a + k2a * 2.0 + k3a * 2.0 + k4a) * sixth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_fourth_order() {
        // q̈ = −q, q(0) = 1 → q(t) = cos t
        let run = |n: usize| {
            let h = 1.0 / n as f64;
            let mut s = ArmState {
                q: JointVector::splat(1.0),
                qd: JointVector::zeros(),
            };
            for k in 0..n {
                s = rk4_step(&s, k as f64 * h, h, |_, q, _| Ok(-*q)).unwrap();
            }
            (s.q[0] - 1f64.cos()).abs()
        };
        let e1 = run(20);
        let e2 = run(40);
        let order = (e1 / e2).log2();
        assert!((order - 4.0).abs() < 0.2, "observed order {order}");
    }

    #[test]
    fn cubic_in_time_is_exact() {
        // q̈ = 6t integrates to q = t³ with no truncation error
        let h = 0.1;
        let mut s = ArmState {
            q: JointVector::zeros(),
            qd: JointVector::zeros(),
        };
        for k in 0..10 {
            s = rk4_step(&s, k as f64 * h, h, |t, _, _| Ok(JointVector::splat(6.0 * t))).unwrap();
        }
        assert!((s.q[0] - 1.0).abs() < 1e-13);
    }
}
