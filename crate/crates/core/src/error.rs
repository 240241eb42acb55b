use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("time {t} s is outside the trajectory interval [0, {duration}] s")]
    OutOfRange { t: f64, duration: f64 },

    #[error("mass matrix is numerically singular at this configuration")]
    SingularConfiguration,

    #[error("{}: {}{field}: {message}", file.display(), joint.map(|j| format!("joint {j}, ")).unwrap_or_default())]
    RobotFile {
        file: PathBuf,
        /// 1-based joint index, when the problem is inside a joint block.
        joint: Option<usize>,
        field: String,
        message: String,
    },

    #[error("{}: {field}: {message}", file.display())]
    Config {
        file: PathBuf,
        field: String,
        message: String,
    },

    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
