use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {d}: must be at least {min}")]
    InvalidDimension { d: usize, min: usize },

    #[error("invalid offset {n} for dimension {d}")]
    InvalidOffset { n: usize, d: usize },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("purity {kappa} outside [1/{d}, 1]")]
    InvalidPurity { kappa: f64, d: usize },

    #[error("infeasible parameters: entry {index} = {value} violates bound {bound}")]
    InfeasibleParameters { index: usize, value: f64, bound: f64 },

    #[error("infeasible pair completion: discriminant {discriminant} < 0")]
    InfeasibleCompletion { discriminant: f64 },

    #[error("spectrum fails validation (max residual {max_residual:e})")]
    InvalidSpectrum { max_residual: f64 },

    #[error("purity equals 1/d; the Q matrix is undefined")]
    DegeneratePurity,

    #[error("matrix {index} is not unitary (residual {residual:e})")]
    NotUnitary { index: usize, residual: f64 },

    #[error("matrix is not traceless (trace {trace:e})")]
    NotTraceless { trace: f64 },

    #[error("unsupported dimension {d}; supported: {supported}")]
    UnsupportedDimension { d: usize, supported: String },

    #[error("basis set {index} is not orthonormal (residual {residual:e})")]
    NotOrthonormal { index: usize, residual: f64 },

    #[error("map is not a permutation of 0..{d}")]
    InvalidPermutation { d: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid witness configuration: {0}")]
    InvalidConfig(String),

    #[error("operation requires purity 1, got {kappa}")]
    UnsupportedPurity { kappa: f64 },

    #[error("family has {found} measurements, complete set needs {expected}")]
    IncompleteFamily { found: usize, expected: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
