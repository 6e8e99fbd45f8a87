//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix rows are ragged or non-square ({rows} rows, row {bad_row} has {bad_len} entries)")]
    NotSquare {
        rows: usize,
        bad_row: usize,
        bad_len: usize,
    },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("unsupported mode count d={d} ({context})")]
    UnsupportedDim { d: usize, context: &'static str },

    #[error("eigensolver failed to converge after {0} sweeps")]
    EigenConvergence(usize),

    #[error("count vector sums to {got}, expected {expected}")]
    CountSumMismatch { got: usize, expected: usize },

    #[error("closed-form probability {0:.6e} below -1e-12; cosine-argument transcription is inconsistent")]
    NegativeProbability(f64),

    #[error(
        "singular outcome support: probability {p:.3e} with gradient magnitude {grad:.3e}; \
         the Fisher information diverges at this phase point"
    )]
    SingularSupport { p: f64, grad: f64 },

    #[error("trigonometric pole in closed form at alpha={0}")]
    TrigPole(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
