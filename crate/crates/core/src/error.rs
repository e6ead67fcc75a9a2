use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ladder: {0}")]
    InvalidLadder(String),

    #[error("invalid sector (N = {sites}, 2Sz = {two_sz}): {reason}")]
    InvalidSector { sites: usize, two_sz: i32, reason: String },

    #[error("configuration {0:#b} is not in the sector")]
    NotInSector(u64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver did not converge after {iterations} restarts (best residual {best_residual:.3e})")]
    NotConverged { iterations: usize, best_residual: f64 },

    #[error("dense oracle limited to dimension {max}, got {dim}")]
    TooLarge { dim: usize, max: usize },

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("density matrix violates the U(1) pattern: {0}")]
    Structure(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("eigensolver failed at theta/pi = {theta_over_pi}: {source}")]
    SweepPoint { theta_over_pi: f64, source: Box<Error> },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
