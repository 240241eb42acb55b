//! Fixed-length per-joint vectors.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::Vector6;

use crate::error::{Error, Result};

/// Number of joints of the arm.
pub const NUM_JOINTS: usize = 6;

/// One value per joint: positions, velocities, accelerations, torques, gains or errors.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct JointVector(pub [f64; NUM_JOINTS]);

impl JointVector {
    pub const fn new(values: [f64; NUM_JOINTS]) -> Self {
        JointVector(values)
    }

    pub const fn zeros() -> Self {
        JointVector([0.0; NUM_JOINTS])
    }

    pub const fn splat(value: f64) -> Self {
        JointVector([value; NUM_JOINTS])
    }

    /// Unit vector along joint `j` (0-based).
    pub fn unit(j: usize) -> Self {
        let mut v = Self::zeros();
        v.0[j] = 1.0;
        v
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        let arr: [f64; NUM_JOINTS] = values.try_into().map_err(|_| {
            Error::invalid(format!(
                "expected {NUM_JOINTS} joint values, got {}",
                values.len()
            ))
        })?;
        Ok(JointVector(arr))
    }

    pub fn from_degrees(deg: [f64; NUM_JOINTS]) -> Self {
        JointVector(deg.map(f64::to_radians))
    }

    pub fn to_degrees(self) -> Self {
        self.map(f64::to_degrees)
    }

    pub fn as_array(&self) -> &[f64; NUM_JOINTS] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.0.iter()
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Self {
        JointVector(self.0.map(f))
    }

    pub fn zip_map(self, other: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = [0.0; NUM_JOINTS];
        for (o, (a, b)) in out.iter_mut().zip(self.0.iter().zip(other.0.iter())) {
            *o = f(*a, *b);
        }
        JointVector(out)
    }

    /// Elementwise product.
    pub fn component_mul(self, other: Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn abs(self) -> Self {
        self.map(f64::abs)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_element(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Rejects NaN/Inf entries, naming `what` in the error.
    pub fn ensure_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{what} contains a non-finite value: {self:?}")))
        }
    }

    pub fn to_vector(self) -> Vector6<f64> {
        Vector6::from(self.0)
    }

    pub fn from_vector(v: &Vector6<f64>) -> Self {
        JointVector([v[0], v[1], v[2], v[3], v[4], v[5]])
    }
}

impl fmt::Debug for JointVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl From<[f64; NUM_JOINTS]> for JointVector {
    fn from(values: [f64; NUM_JOINTS]) -> Self {
        JointVector(values)
    }
}

impl Index<usize> for JointVector {
    type Output = f64;
    fn index(&self, j: usize) -> &f64 {
        &self.0[j]
    }
}

impl IndexMut<usize> for JointVector {
    fn index_mut(&mut self, j: usize) -> &mut f64 {
        &mut self.0[j]
    }
}

impl Add for JointVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl AddAssign for JointVector {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for JointVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Neg for JointVector {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|v| -v)
    }
}

impl Mul<f64> for JointVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.map(|v| v * rhs)
    }
}

impl Mul<JointVector> for f64 {
    type Output = JointVector;
    fn mul(self, rhs: JointVector) -> JointVector {
        rhs * self
    }
}
