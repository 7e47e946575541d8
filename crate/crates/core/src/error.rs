use thiserror::Error;

/// Errors raised by the constructions in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("N must be even and at least 2, got {0}")]
    Dimension(usize),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("closed form not available for N = {0}")]
    UnsupportedSize(usize),
    #[error("coupling {0} lies outside the open interval (-1, 1)")]
    CouplingDomain(f64),
    #[error("index j = {j} out of range 1..={n}")]
    IndexRange { j: usize, n: usize },
    #[error("odd degree {0} requires an explicit sign")]
    MissingSign(u32),
    #[error("spectrum is degenerate or complex: {0}")]
    SpectralDegeneracy(String),
    #[error("matrix does not satisfy the intertwining relation (residual {0:e})")]
    NonMember(f64),
    #[error("recurrent construction failed: {0}")]
    Construction(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
