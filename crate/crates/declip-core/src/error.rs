//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by signal construction, transforms, and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A sample or coefficient is NaN or infinite.
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    /// A signal or spectrum shorter than the minimum supported length.
    #[error("length {len} is too short (need at least 2 samples)")]
    TooShort { len: usize },

    /// Two vectors that must have equal length do not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Clip bounds with `c_lower >= c_upper`.
    #[error("invalid clip bounds: lower {lower} must be strictly below upper {upper}")]
    InvalidClipBounds { lower: f64, upper: f64 },

    /// Sparsity level rejected by the synthesizer (odd, too small, or too
    /// large for the signal length).
    #[error(
        "invalid sparsity K={k} for N={n} (K must be even with 2 <= K <= N-2 and K/2 <= N/2-1)"
    )]
    InvalidSparsity { k: usize, n: usize },

    /// No symmetric clip level yields exactly the requested number of
    /// non-clipped samples; carries the nearest achievable counts.
    #[error("no clip level yields exactly M={target} non-clipped samples (nearest achievable: {below} below, {above} above)")]
    UnachievableM {
        target: usize,
        below: usize,
        above: usize,
    },

    /// Spectrum handed to the inverse transform violates Hermitian symmetry
    /// beyond tolerance, so it does not represent a real signal.
    #[error("spectrum is not Hermitian-symmetric (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// An index set entry outside `[0, N)`.
    #[error("index {index} out of range for length {n_len}")]
    IndexOutOfRange { index: usize, n_len: usize },

    /// A parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed signal CSV input.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// I/O failure while reading or writing signal files.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
