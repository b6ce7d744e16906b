use std::fmt;

use glpb::Error;

pub const OK: u8 = 0;
pub const USAGE: u8 = 1;
pub const INPUT: u8 = 2;
pub const TOO_MANY_LEVELS: u8 = 3;
pub const DIM_MISMATCH: u8 = 4;
pub const INSUFFICIENT_PATIENTS: u8 = 5;
pub const UNASSIGNED_PATIENT: u8 = 6;
pub const ALL_FAILED: u8 = 7;

/// An error paired with the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: USAGE,
            message: message.into(),
        }
    }

    pub fn code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Decode { .. } | Error::UnreadableRoot { .. } => INPUT,
            Error::TooManyLevels { .. } => TOO_MANY_LEVELS,
            Error::DimMismatch(_) | Error::TargetDimMismatch { .. } => DIM_MISMATCH,
            Error::InsufficientPatients { .. } => INSUFFICIENT_PATIENTS,
            Error::UnassignedPatient(_) => UNASSIGNED_PATIENT,
            _ => USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}
