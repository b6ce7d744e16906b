use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid mask: {0}")]
    InvalidMask(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "expand target {target_w}x{target_h} not reachable from {width}x{height} \
         (each axis must be 2n-1 or 2n)"
    )]
    TargetDimMismatch {
        width: usize,
        height: usize,
        target_w: usize,
        target_h: usize,
    },

    #[error(
        "{requested} pyramid levels requested but a {width}x{height} image supports at most {max}"
    )]
    TooManyLevels {
        requested: usize,
        max: usize,
        width: usize,
        height: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("cannot decode {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("cannot encode image: {0}")]
    Encode(String),

    #[error("dataset root {path} is not readable: {reason}")]
    UnreadableRoot { path: PathBuf, reason: String },

    #[error("patient {patient} appears under both benign and malignant labels")]
    InconsistentPatient { patient: String },

    #[error(
        "no valid cross-patient pair in the {pool} pool (needs at least two distinct patients)"
    )]
    InsufficientPatients { pool: String },

    #[error("patient {0} is not assigned to train or test by the fold")]
    UnassignedPatient(String),

    #[error("invalid fold file: {0}")]
    InvalidFold(String),

    #[error("invalid manifest: {0}")]
    InvalidManifest(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
