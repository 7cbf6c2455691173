use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin parameters: {0}")]
    InvalidParams(String),

    #[error("invalid preset: {0}")]
    InvalidPreset(String),

    #[error("matrix is not symmetric: |M[{row},{col}] - M[{col},{row}]| = {asym:e}")]
    NotSymmetric { row: usize, col: usize, asym: f64 },

    #[error("matrix is not Hermitian: |M[{row},{col}] - conj(M[{col},{row}])| = {asym:e}")]
    NotHermitian { row: usize, col: usize, asym: f64 },

    #[error("eigensolver did not converge after {0} iterations")]
    EigenNoConvergence(usize),

    #[error("kinetic coefficient K(φ) = {value:e} < 0 at φ = {phi}; the angle Hamiltonian is unbounded below")]
    NegativeKinetic { phi: f64, value: f64 },

    #[error("plane-wave cutoff too small: Fourier tail {tail:e} beyond |n| = {cutoff}")]
    InsufficientCutoff { cutoff: usize, tail: f64 },

    #[error("imaginary residue {0:e} in a moment sum that must be real")]
    ImaginaryResidue(f64),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("{0} requires integer spin, got j = {1}")]
    IntegerSpinRequired(&'static str, f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
