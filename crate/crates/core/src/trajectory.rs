//! Quintic point-to-point joint trajectories.
//!
//! `q(t) = q_i + r(t)·(q_f − q_i)` with `r(s) = 10s³ − 15s⁴ + 6s⁵`, `s = t/t_f`.
//! Velocity and acceleration are the exact time derivatives of the position.

use crate::error::{Error, Result};
use crate::joint::JointVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySpec {
    pub q_initial: JointVector,
    pub q_final: JointVector,
    /// Duration `t_f`, s.
    pub duration: f64,
}

/// Reference position, velocity and acceleration at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesiredState {
    pub q: JointVector,
    pub qd: JointVector,
    pub qdd: JointVector,
}

impl TrajectorySpec {
    pub fn new(q_initial: JointVector, q_final: JointVector, duration: f64) -> Result<Self> {
        q_initial.ensure_finite("initial pose")?;
        q_final.ensure_finite("final pose")?;
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::invalid(format!(
                "trajectory duration must be positive, got {duration}"
            )));
        }
        Ok(TrajectorySpec {
            q_initial,
            q_final,
            duration,
        })
    }

    /// Poses given in degrees.
    pub fn from_degrees(initial: [f64; 6], final_: [f64; 6], duration: f64) -> Result<Self> {
        Self::new(
            JointVector::from_degrees(initial),
            JointVector::from_degrees(final_),
            duration,
        )
    }

    /// Displacement `D = q_f − q_i`.
    pub fn displacement(&self) -> JointVector {
        self.q_final - self.q_initial
    }

    pub fn desired_state(&self, t: f64) -> Result<DesiredState> {
        let (r, rd, rdd) = scaling_with_derivatives(t, self.duration)?;
        let d = self.displacement();
        Ok(DesiredState {
            q: self.q_initial + d * r,
            qd: d * rd,
            qdd: d * rdd,
        })
    }
}

fn check_time(t: f64, duration: f64) -> Result<()> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::invalid(format!(
            "trajectory duration must be positive, got {duration}"
        )));
    }
    if !(0.0..=duration).contains(&t) {
        return Err(Error::OutOfRange { t, duration });
    }
    Ok(())
}

/// Time scaling `r(t) ∈ [0, 1]`.
pub fn scaling(t: f64, duration: f64) -> Result<f64> {
    scaling_with_derivatives(t, duration).map(|(r, _, _)| r)
}

/// `r(t)`, `ṙ(t)` and `r̈(t)`.
pub fn scaling_with_derivatives(t: f64, duration: f64) -> Result<(f64, f64, f64)> {
    check_time(t, duration)?;
    let s = t / duration;
    let s2 = s * s;
    let s3 = s2 * s;
    let r = s3 * (10.0 + s * (-15.0 + 6.0 * s));
    let rd = 30.0 * s2 * (1.0 - s) * (1.0 - s) / duration;
    let rdd = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / (duration * duration);
    Ok((r, rd, rdd))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_move() -> TrajectorySpec {
        TrajectorySpec::from_degrees(
            [-20.0, 60.0, -120.0, 0.0, -30.0, 0.0],
            [20.0, -60.0, -60.0, 0.0, 30.0, 0.0],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn scaling_endpoints_and_midpoint() {
        assert_eq!(scaling(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(scaling(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(scaling(0.5, 1.0).unwrap(), 0.5);
        assert_eq!(scaling(2.0, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn out_of_range_time_is_rejected() {
        assert!(matches!(scaling(-1e-9, 1.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(scaling(1.0 + 1e-9, 1.0), Err(Error::OutOfRange { .. })));
        assert!(reference_move().desired_state(1.5).is_err());
        assert!(scaling(0.5, 0.0).is_err());
    }

    #[test]
    fn nonpositive_duration_is_rejected() {
        let z = JointVector::zeros();
        assert!(TrajectorySpec::new(z, z, 0.0).is_err());
        assert!(TrajectorySpec::new(z, z, -1.0).is_err());
        assert!(TrajectorySpec::new(z, z, f64::NAN).is_err());
    }

    #[test]
    fn boundary_states() {
        let spec = reference_move();
        let start = spec.desired_state(0.0).unwrap();
        assert_eq!(start.q, spec.q_initial);
        assert_eq!(start.qd, JointVector::zeros());
        assert_eq!(start.qdd, JointVector::zeros());
        let end = spec.desired_state(1.0).unwrap();
        assert_eq!(end.q, spec.q_final);
        assert!(end.qd.norm_inf() < 1e-12);
        assert!(end.qdd.norm_inf() < 1e-12);
    }

    #[test]
    fn midpoint_velocity_peak() {
        // ṙ(t_f/2) = 30·(1/2)²·(1/2)²/t_f = 1.875/t_f
        for tf in [1.0, 2.5] {
            let spec = TrajectorySpec::new(reference_move().q_initial, reference_move().q_final, tf).unwrap();
            let mid = spec.desired_state(tf / 2.0).unwrap();
            let expected = spec.displacement() * (1.875 / tf);
            assert!((mid.qd - expected).norm_inf() < 1e-12);
            assert!(mid.qdd.norm_inf() < 1e-12);
        }
    }

    #[test]
    fn stationary_joints_stay_still() {
        let spec = reference_move();
        for k in 0..=100 {
            let s = spec.desired_state(k as f64 / 100.0).unwrap();
            for j in [3, 5] {
                assert_eq!(s.qd[j], 0.0);
                assert_eq!(s.qdd[j], 0.0);
                assert_eq!(s.q[j], 0.0);
            }
        }
    }
}
