//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {context}: {left:?} vs {right:?}")]
    ShapeMismatch { context: &'static str, left: Vec<usize>, right: Vec<usize> },

    #[error("length {len} is not a power of the base {base} (no implicit padding)")]
    NotAPowerOfBase { len: usize, base: usize },

    #[error("dense budget exceeded: {needed} entries requested, budget is {budget}")]
    DenseBudgetExceeded { needed: usize, budget: usize },

    #[error("index {index:?} out of range for shape {shape:?}")]
    IndexOutOfRange { index: Vec<usize>, shape: Vec<usize> },

    #[error("total size of shape {dims:?} overflows usize")]
    SizeOverflow { dims: Vec<usize> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("SVD did not converge for a {size:?} matrix after {sweeps} QR sweeps")]
    SvdNonConvergence { size: (usize, usize), sweeps: usize },

    #[error("singular linear system")]
    SingularSystem,

    #[error(
        "tensor linear solver did not reach tolerance {tol:.3e} after {sweeps} sweeps \
         (achieved residual {achieved:.3e})"
    )]
    SolverNonConvergence { tol: f64, sweeps: usize, achieved: f64 },

    #[error("serialization: {0}")]
    Serialization(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
