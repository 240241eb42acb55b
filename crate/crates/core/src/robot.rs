//! Kinematic and inertial description of a six-joint revolute arm.
//!
//! Parameters are read from a TOML file with one `[[joint]]` block per link:
//!
//! ```toml
//! gravity = [0.0, 0.0, -9.81]        # m/s^2, base frame
//!
//! [[joint]]
//! alpha_deg = 90.0                   # link twist
//! a = 0.0                            # link length, m
//! d = 0.0                            # joint offset, m
//! mass = 17.4                        # kg
//! com = [-0.3638, 0.006, 0.2275]     # centre of mass in link frame, m
//! inertia = [0.13, 0.524, 0.539, 0.0, 0.0, 0.0]  # Ixx Iyy Izz Ixy Ixz Iyz about the COM
//! rotor_inertia = 2.3248             # kg m^2, seen at the joint
//! ```
//!
//! Frames follow the standard Denavit–Hartenberg convention: link `i` carries
//! frame `i`, located on the axis of joint `i + 1`.

use std::path::{Path, PathBuf};

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::joint::NUM_JOINTS;

const PUMA560_TOML: &str = include_str!("../data/puma560.toml");

/// Standard Denavit–Hartenberg row of a revolute joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DhRow {
    /// Link twist, rad.
    pub alpha: f64,
    /// Link length, m.
    pub a: f64,
    /// Joint offset, m.
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub dh: DhRow,
    pub mass: f64,
    /// Centre of mass in the link frame, m.
    pub com: Vector3<f64>,
    /// Rotational inertia about the centre of mass, link-frame axes, kg·m².
    pub inertia: Matrix3<f64>,
    /// Motor rotor inertia reflected to the joint, kg·m².
    pub rotor_inertia: f64,
}

/// Immutable rigid-body model of the arm.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotModel {
    pub name: String,
    pub links: [Link; NUM_JOINTS],
    /// Gravitational acceleration in the base frame, m/s².
    pub gravity: Vector3<f64>,
}

impl RobotModel {
    /// The bundled PUMA 560 parameter set.
    pub fn puma560() -> Self {
        Self::from_toml_str(PUMA560_TOML, Path::new("<bundled puma560.toml>"))
            .expect("bundled PUMA 560 data file is valid")
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, path)
    }

    /// Parses a parameter file; `origin` is only used in error messages.
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let p = Parser {
            file: origin.to_path_buf(),
        };
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| p.err(None, "<document>", e.to_string().trim_end()))?;

        let name = match table.get("name") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(p.err(None, "name", "expected a string")),
            None => String::from("unnamed arm"),
        };
        let gravity = match table.get("gravity") {
            Some(v) => Vector3::from(p.array::<3>(None, "gravity", v)?),
            None => Vector3::new(0.0, 0.0, -9.81),
        };

        let joints = match table.get("joint") {
            Some(Value::Array(items)) => items,
            Some(_) => return Err(p.err(None, "joint", "expected an array of [[joint]] tables")),
            None => return Err(p.err(None, "joint", "missing [[joint]] blocks")),
        };
        if joints.len() != NUM_JOINTS {
            return Err(p.err(
                None,
                "joint",
                format!("expected {NUM_JOINTS} [[joint]] blocks, found {}", joints.len()),
            ));
        }

        let mut links = Vec::with_capacity(NUM_JOINTS);
        for (idx, item) in joints.iter().enumerate() {
            let j = Some(idx + 1);
            let Value::Table(t) = item else {
                return Err(p.err(j, "joint", "expected a table"));
            };
            links.push(p.link(j, t)?);
        }
        let links: [Link; NUM_JOINTS] = links.try_into().expect("length checked above");

        Ok(RobotModel {
            name,
            links,
            gravity,
        })
    }

    /// Copy of the model with a different gravity vector.
    pub fn with_gravity(&self, gravity: Vector3<f64>) -> Self {
        RobotModel {
            gravity,
            ..self.clone()
        }
    }

    pub fn without_gravity(&self) -> Self {
        self.with_gravity(Vector3::zeros())
    }
}

struct Parser {
    file: PathBuf,
}

impl Parser {
    fn err(&self, joint: Option<usize>, field: &str, message: impl Into<String>) -> Error {
        Error::RobotFile {
            file: self.file.clone(),
            joint,
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn number(&self, joint: Option<usize>, field: &str, v: &Value) -> Result<f64> {
        let x = match v {
            Value::Float(x) => *x,
            Value::Integer(i) => *i as f64,
            _ => return Err(self.err(joint, field, "expected a number")),
        };
        if !x.is_finite() {
            return Err(self.err(joint, field, "value must be finite"));
        }
        Ok(x)
    }

    fn array<const N: usize>(&self, joint: Option<usize>, field: &str, v: &Value) -> Result<[f64; N]> {
        let Value::Array(items) = v else {
            return Err(self.err(joint, field, format!("expected an array of {N} numbers")));
        };
        if items.len() != N {
            return Err(self.err(
                joint,
                field,
                format!("expected {N} numbers, found {}", items.len()),
            ));
        }
        let mut out = [0.0; N];
        for (o, item) in out.iter_mut().zip(items) {
            *o = self.number(joint, field, item)?;
        }
        Ok(out)
    }

    fn required<'t>(&self, joint: Option<usize>, t: &'t Table, field: &str) -> Result<&'t Value> {
        t.get(field)
            .ok_or_else(|| self.err(joint, field, "missing required field"))
    }

    fn link(&self, j: Option<usize>, t: &Table) -> Result<Link> {
        const KNOWN: [&str; 8] = [
            "alpha_deg",
            "a",
            "d",
            "mass",
            "com",
            "inertia",
            "rotor_inertia",
            "kind",
        ];
        if let Some(unknown) = t.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(self.err(j, unknown, "unknown field"));
        }
        if let Some(kind) = t.get("kind") {
            if kind.as_str() != Some("revolute") {
                return Err(self.err(j, "kind", "only revolute joints are supported"));
            }
        }

        let alpha = self
            .number(j, "alpha_deg", self.required(j, t, "alpha_deg")?)?
            .to_radians();
        let a = self.number(j, "a", self.required(j, t, "a")?)?;
        let d = self.number(j, "d", self.required(j, t, "d")?)?;

        let mass = self.number(j, "mass", self.required(j, t, "mass")?)?;
        if mass <= 0.0 {
            return Err(self.err(j, "mass", "mass must be strictly positive"));
        }

        let com = Vector3::from(self.array::<3>(j, "com", self.required(j, t, "com")?)?);

        let [ixx, iyy, izz, ixy, ixz, iyz] =
            self.array::<6>(j, "inertia", self.required(j, t, "inertia")?)?;
        let inertia = Matrix3::new(ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz);
        let min_eig = SymmetricEigen::new(inertia).eigenvalues.min();
        if min_eig < -1e-12 * inertia.norm().max(1.0) {
            return Err(self.err(
                j,
                "inertia",
                format!("inertia tensor is not positive semidefinite (eigenvalue {min_eig:e})"),
            ));
        }

        let rotor_inertia = match t.get("rotor_inertia") {
            Some(v) => self.number(j, "rotor_inertia", v)?,
            None => 0.0,
        };
        if rotor_inertia < 0.0 {
            return Err(self.err(j, "rotor_inertia", "must be nonnegative"));
        }

        Ok(Link {
            dh: DhRow { alpha, a, d },
            mass,
            com,
            inertia,
            rotor_inertia,
        })
    }
}
