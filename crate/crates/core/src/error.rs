use thiserror::Error;

/// Errors raised by state construction, metrology, and bound evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not one (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid spin quantum number {0}: 2j must be a nonnegative integer")]
    InvalidSpin(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Fock cutoff {cutoff} too small: truncated tail mass {tail:e}")]
    CutoffTooSmall { cutoff: usize, tail: f64 },

    #[error("ancilla dimension {ancilla} is smaller than the state rank {rank}")]
    AncillaTooSmall { ancilla: usize, rank: usize },

    #[error("vanishing signal: |<i[A,B]>| = {0:e}")]
    VanishingSignal(f64),

    #[error("quantum Fisher information vanishes ({0:e}); the parameter is not estimable")]
    Unestimable(f64),

    #[error("ground state is degenerate (gap {gap:e})")]
    DegenerateGroundState { gap: f64 },

    #[error("iteration did not converge after {0} steps")]
    NotConverged(usize),

    #[error("no grid point reaches the requested constraint values")]
    Infeasible,

    #[error("grid is empty")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
