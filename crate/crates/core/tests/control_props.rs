//! Closed-loop properties, checked against a per-joint scalar error model.

use pumatune_core::control::{control_torque, simulate, GainSet, SimConfig, DIVERGED_IAE};
use pumatune_core::dynamics::inverse_dynamics;
use pumatune_core::integrate::ArmState;
use pumatune_core::tuning::{Chromosome, GainTuningProblem};
use pumatune_core::{DesiredState, JointVector, RobotModel, TrajectorySpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reference_move() -> TrajectorySpec {
    TrajectorySpec::from_degrees(
        [-20.0, 60.0, -120.0, 0.0, -30.0, 0.0],
        [20.0, -60.0, -60.0, 0.0, 30.0, 0.0],
        1.0,
    )
    .unwrap()
}

fn offset_start(spec: &TrajectorySpec, offset: f64) -> ArmState {
    ArmState {
        q: spec.q_initial + JointVector::splat(offset),
        qd: JointVector::zeros(),
    }
}

/// Integrates ë + kd·ė + kp·e = 0 with a fine explicit-midpoint scheme and returns
/// e sampled every `dt` over [0, t_f].
fn scalar_error_oracle(kp: f64, kd: f64, e0: f64, dt: f64, tf: f64) -> Vec<f64> {
    let sub = 2000usize;
    let h = dt / sub as f64;
    let samples = (tf / dt).round() as usize;
    let (mut e, mut v) = (e0, 0.0);
    let mut out = vec![e];
    for _ in 0..samples {
        for _ in 0..sub {
            let a = -kd * v - kp * e;
            let (em, vm) = (e + 0.5 * h * v, v + 0.5 * h * a);
            let am = -kd * vm - kp * em;
            e += h * vm;
            v += h * am;
        }
        out.push(e);
    }
    out
}

#[test]
fn control_torque_matches_hand_assembled_law() {
    let m = RobotModel::puma560();
    let g = GainSet::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut rj = |r: f64| JointVector::new(std::array::from_fn(|_| rng.random_range(-r..=r)));
    for _ in 0..20 {
        let (q, qd) = (rj(3.0), rj(1.0));
        let desired = DesiredState {
            q: rj(3.0),
            qd: rj(1.0),
            qdd: rj(5.0),
        };
        let mut aux = JointVector::zeros();
        for j in 0..6 {
            aux[j] = desired.qdd[j] + g.kd[j] * (desired.qd[j] - qd[j]) + g.kp[j] * (desired.q[j] - q[j]);
        }
        let oracle = inverse_dynamics(&m, &q, &qd, &aux).unwrap();
        let tau = control_torque(&m, &g, &q, &qd, &desired).unwrap();
        assert!((tau - oracle).norm_inf() < 1e-9);
    }
}

#[test]
fn joint_errors_follow_second_order_model() {
    let m = RobotModel::puma560();
    let spec = reference_move();
    let g = GainSet::reference();
    let r = simulate(&m, &g, &spec, &SimConfig::default(), offset_start(&spec, 0.05)).unwrap();
    let errs = r.errors();
    for j in 0..6 {
        let oracle = scalar_error_oracle(g.kp[j], g.kd[j], -0.05, 0.01, 1.0);
        for (k, e) in errs.iter().enumerate() {
            assert!((e[j] - oracle[k]).abs() < 1e-7, "joint {j} sample {k}: {} vs {}", e[j], oracle[k]);
        }
    }
}

#[test]
fn offset_decays_by_a_factor_of_ten() {
    let m = RobotModel::puma560();
    let spec = reference_move();
    let r = simulate(&m, &GainSet::reference(), &spec, &SimConfig::default(), offset_start(&spec, 0.05)).unwrap();
    let errs = r.errors();
    for j in 0..6 {
        let abs: Vec<f64> = errs.iter().map(|e| e[j].abs()).collect();
        assert!(abs[abs.len() - 1] < 0.05 / 10.0, "joint {j} final {}", abs[abs.len() - 1]);
        // successive local peaks of |e| shrink
        let peaks: Vec<f64> = (1..abs.len() - 1)
            .filter(|&k| abs[k] >= abs[k - 1] && abs[k] >= abs[k + 1])
            .map(|k| abs[k])
            .collect();
        for w in peaks.windows(2) {
            assert!(w[1] < w[0], "joint {j}: peaks {peaks:?}");
        }
    }
}

#[test]
fn halving_integration_step_barely_moves_final_state() {
    let m = RobotModel::puma560();
    let spec = reference_move();
    let run = |dt: f64| {
        let cfg = SimConfig {
            dt_integration: dt,
            ..SimConfig::default()
        };
        simulate(&m, &GainSet::reference(), &spec, &cfg, offset_start(&spec, 0.05)).unwrap()
    };
    let a = run(0.001);
    let b = run(0.0005);
    let diff = (*a.q.last().unwrap() - *b.q.last().unwrap()).norm_inf();
    assert!(diff < 1e-6, "{diff}");
}

#[test]
fn simulation_is_bit_identical_on_repeat() {
    let m = RobotModel::puma560();
    let spec = reference_move();
    let run = || simulate(&m, &GainSet::reference(), &spec, &SimConfig::default(), offset_start(&spec, 0.03)).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn iae_zero_only_for_zero_error() {
    let m = RobotModel::puma560();
    let spec = reference_move();
    let q = spec.q_initial;
    let still = TrajectorySpec::new(q, q, 1.0).unwrap();
    let r = simulate(&m, &GainSet::reference(), &still, &SimConfig::default(), offset_start(&still, 0.0)).unwrap();
    assert!(r.iae.norm_inf() < 1e-9);
    let r = simulate(&m, &GainSet::reference(), &still, &SimConfig::default(), offset_start(&still, 0.01)).unwrap();
    assert!(r.iae.iter().all(|v| *v > 0.0));
}

#[test]
fn larger_kp_lowers_iae_as_the_oracle_predicts() {
    let m = RobotModel::puma560();
    let problem = GainTuningProblem::new(m, reference_move(), SimConfig::default(), JointVector::splat(0.05));
    let genes = |kp: f64| {
        let mut g = [20.0; 12];
        g[..6].iter_mut().for_each(|x| *x = kp);
        Chromosome(g)
    };
    let oracle_iae = |kp: f64| -> f64 {
        scalar_error_oracle(kp, 20.0, 0.05, 0.01, 1.0).iter().map(|e| e.abs()).sum()
    };
    let a = problem.evaluate_chromosome(&genes(100.0)).unwrap();
    let b = problem.evaluate_chromosome(&genes(50.0)).unwrap();
    let (oa, ob) = (oracle_iae(100.0), oracle_iae(50.0));
    assert!(oa <= ob);
    for j in 0..6 {
        assert!(a[j] <= b[j]);
        assert!((a[j] - oa).abs() < 1e-5);
        assert!((b[j] - ob).abs() < 1e-5);
    }
}

#[test]
fn on_trajectory_evaluation_is_near_zero_for_any_gains() {
    let m = RobotModel::puma560();
    let problem = GainTuningProblem::new(m, reference_move(), SimConfig::default(), JointVector::zeros());
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let c = Chromosome(std::array::from_fn(|_| rng.random_range(0.0..100.0)));
        let iae = problem.evaluate_chromosome(&c).unwrap();
        assert!(iae.max_element() < 1e-3);
        assert_eq!(iae, problem.evaluate_chromosome(&c).unwrap());
    }
}

#[test]
fn unstable_gains_score_the_sentinel() {
    let m = RobotModel::puma560();
    let cfg = SimConfig {
        dt_control: 0.01,
        dt_integration: 0.01,
        ..SimConfig::default()
    };
    let problem = GainTuningProblem::new(m, reference_move(), cfg, JointVector::splat(0.05));
    let iae = problem.evaluate_chromosome(&Chromosome([1e4; 12])).unwrap();
    assert_eq!(iae, JointVector::splat(DIVERGED_IAE));
}
