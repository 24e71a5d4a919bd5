use thiserror::Error;

/// Errors raised while configuring or running a simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid configuration: {field} {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    /// Lattice and enforcement state disagree on the grid size.
    #[error("dimension mismatch: lattice side {lattice}, enforcement side {enforcement}")]
    DimensionMismatch { lattice: usize, enforcement: usize },
    /// Exact enumeration requested for a lattice that is too large.
    #[error("exact enumeration supports side lengths 2..=4, got {0}")]
    EnumerationTooLarge(usize),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
