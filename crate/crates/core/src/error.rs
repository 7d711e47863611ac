//! Error type shared across the crate.

use std::fmt;

/// Error raised by solver operations.
///
/// Configuration problems (bad grid sizes, unknown model names, invalid CFL
/// targets) are reported as [`AfError::Config`]; everything else corresponds
/// to a runtime condition the caller may want to react to.
#[derive(Debug, Clone, PartialEq)]
pub enum AfError {
    /// Invalid configuration or argument.
    Config(String),
    /// Requested time step exceeds the stability limit.
    CflViolation { dt: f64, dt_max: f64 },
    /// A state left the admissible region of its model (e.g. water depth ≤ 0).
    Inadmissible(String),
    /// Evaluation outside the valid domain of a grid or reconstruction.
    Domain(String),
    /// No exact reference solution is available for the requested setup.
    ReferenceUnavailable(String),
    /// Time stepping stopped making progress.
    Stagnation { dt: f64 },
    /// File I/O failure.
    Io(String),
    /// Internal consistency failure (out-of-range index, non-finite value).
    Internal(String),
}

pub type Result<T> = std::result::Result<T, AfError>;

impl fmt::Display for AfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AfError::Config(msg) => write!(f, "configuration error: {msg}"),
            AfError::CflViolation { dt, dt_max } => {
                write!(f, "CFL violation: dt = {dt:e} exceeds stable limit {dt_max:e}")
            }
            AfError::Inadmissible(msg) => write!(f, "inadmissible state: {msg}"),
            AfError::Domain(msg) => write!(f, "domain error: {msg}"),
            AfError::ReferenceUnavailable(msg) => {
                write!(f, "no exact reference available: {msg}")
            }
            AfError::Stagnation { dt } => {
                write!(f, "time stepping stagnated: dt = {dt:e} is effectively zero")
            }
            AfError::Io(msg) => write!(f, "i/o error: {msg}"),
            AfError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for AfError {}

impl From<std::io::Error> for AfError {
    fn from(e: std::io::Error) -> Self {
        AfError::Io(e.to_string())
    }
}
