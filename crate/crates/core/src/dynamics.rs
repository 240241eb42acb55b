//! Rigid-body dynamics of the arm.
//!
//! [`inverse_dynamics`] is the only primitive: a recursive Newton–Euler pass over
//! standard-DH link frames. The joint-space mass matrix is assembled from
//! unit-acceleration passes with gravity removed, the bias torques (Coriolis,
//! centrifugal and gravity) from a zero-acceleration pass, and
//! [`forward_dynamics`] solves `A(q) q̈ = τ − h(q, q̇)` by Cholesky factorisation.

use nalgebra::{Cholesky, Matrix3, Matrix6, Vector3, Vector6};

use crate::error::{Error, Result};
use crate::joint::{JointVector, NUM_JOINTS};
use crate::robot::{Link, RobotModel};

/// Joint-space inertia matrix `A(q)`, kg·m².
pub type MassMatrix = Matrix6<f64>;

fn check(v: &JointVector, what: &str) -> Result<()> {
    v.ensure_finite(what)
}

/// Rotation of link frame `i` expressed in frame `i − 1`.
fn link_rotation(link: &Link, q: f64) -> Matrix3<f64> {
    let (st, ct) = q.sin_cos();
    let (sa, ca) = link.dh.alpha.sin_cos();
    Matrix3::new(
        ct, -st * ca, st * sa, //
        st, ct * ca, -ct * sa, //
        0.0, sa, ca,
    )
}

/// Origin of frame `i` relative to origin of frame `i − 1`, expressed in frame `i`.
fn link_offset(link: &Link) -> Vector3<f64> {
    let (sa, ca) = link.dh.alpha.sin_cos();
    Vector3::new(link.dh.a, link.dh.d * sa, link.dh.d * ca)
}

fn rnea(model: &RobotModel, q: &JointVector, qd: &JointVector, qdd: &JointVector) -> JointVector {
    let z = Vector3::z();
    let mut rot = [Matrix3::identity(); NUM_JOINTS];
    let mut force = [Vector3::zeros(); NUM_JOINTS];
    let mut moment = [Vector3::zeros(); NUM_JOINTS];

    // Outward pass: velocities and accelerations of each link in its own frame.
    let mut w = Vector3::zeros();
    let mut wd = Vector3::zeros();
    let mut vd = -model.gravity;
    for (i, link) in model.links.iter().enumerate() {
        rot[i] = link_rotation(link, q[i]);
        let rt = rot[i].transpose();
        let p = link_offset(link);

        wd = rt * (wd + z * qdd[i] + w.cross(&(z * qd[i])));
        w = rt * (w + z * qd[i]);
        vd = wd.cross(&p) + w.cross(&w.cross(&p)) + rt * vd;

        let vc = wd.cross(&link.com) + w.cross(&w.cross(&link.com)) + vd;
        force[i] = link.mass * vc;
        moment[i] = link.inertia * wd + w.cross(&(link.inertia * w));
    }

    // Inward pass: forces and moments about each joint axis.
    let mut tau = JointVector::zeros();
    let mut f = Vector3::zeros();
    let mut n = Vector3::zeros();
    for i in (0..NUM_JOINTS).rev() {
        let link = &model.links[i];
        let p = link_offset(link);
        let r_next = if i + 1 < NUM_JOINTS {
            rot[i + 1]
        } else {
            Matrix3::identity()
        };
        n = r_next * (n + (r_next.transpose() * p).cross(&f))
            + (p + link.com).cross(&force[i])
            + moment[i];
        f = r_next * f + force[i];
        // joint i axis (z of frame i-1) expressed in frame i
        let axis = rot[i].transpose() * z;
        tau[i] = n.dot(&axis) + link.rotor_inertia * qdd[i];
    }
    tau
}

/// Joint torques `τ = A(q) q̈ + h(q, q̇)` for the given motion.
pub fn inverse_dynamics(
    model: &RobotModel,
    q: &JointVector,
    qd: &JointVector,
    qdd: &JointVector,
) -> Result<JointVector> {
    check(q, "q")?;
    check(qd, "qd")?;
    check(qdd, "qdd")?;
    Ok(rnea(model, q, qd, qdd))
}

/// Joint-space inertia matrix; column `j` is the gravity-free torque for unit acceleration of joint `j`.
pub fn mass_matrix(model: &RobotModel, q: &JointVector) -> Result<MassMatrix> {
    check(q, "q")?;
    Ok(mass_matrix_unchecked(model, q))
}

fn mass_matrix_unchecked(model: &RobotModel, q: &JointVector) -> MassMatrix {
    let free = model.without_gravity();
    let zero = JointVector::zeros();
    let mut a = MassMatrix::zeros();
    for j in 0..NUM_JOINTS {
        let col = rnea(&free, q, &zero, &JointVector::unit(j));
        a.set_column(j, &col.to_vector());
    }
    // The recursion is symmetric up to rounding; make it exact.
    (a + a.transpose()) * 0.5
}

/// Coriolis, centrifugal and gravity torques `h(q, q̇)`.
pub fn bias_torques(model: &RobotModel, q: &JointVector, qd: &JointVector) -> Result<JointVector> {
    check(q, "q")?;
    check(qd, "qd")?;
    Ok(rnea(model, q, qd, &JointVector::zeros()))
}

/// Gravity torques `g(q)`.
pub fn gravity_torques(model: &RobotModel, q: &JointVector) -> Result<JointVector> {
    bias_torques(model, q, &JointVector::zeros())
}

/// Joint accelerations produced by torques `tau`: solves `A(q) q̈ = τ − h(q, q̇)`.
pub fn forward_dynamics(
    model: &RobotModel,
    q: &JointVector,
    qd: &JointVector,
    tau: &JointVector,
) -> Result<JointVector> {
    check(q, "q")?;
    check(qd, "qd")?;
    check(tau, "tau")?;
    let a = mass_matrix_unchecked(model, q);
    let h = rnea(model, q, qd, &JointVector::zeros());
    let rhs: Vector6<f64> = (*tau - h).to_vector();
    let chol = Cholesky::new(a).ok_or(Error::SingularConfiguration)?;
    let qdd = chol.solve(&rhs);
    let out = JointVector::from_vector(&qdd);
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::SingularConfiguration)
    }
}

/// Kinetic energy `½ q̇ᵀ A(q) q̇`, J.
pub fn kinetic_energy(model: &RobotModel, q: &JointVector, qd: &JointVector) -> Result<f64> {
    let a = mass_matrix(model, q)?;
    check(qd, "qd")?;
    let v = qd.to_vector();
    Ok(0.5 * v.dot(&(a * v)))
}
