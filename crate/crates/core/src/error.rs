use thiserror::Error;

/// Errors raised by the field, dynamics, symmetry and conservation modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("non-finite value in {what} at sample {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("value count {got} does not match grid size {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("Laplacian inversion requires a zero-mean source, got mean {mean:e}")]
    Solvability { mean: f64 },

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("non-periodic configuration: {0}")]
    Periodicity(String),

    #[error("initial condition support too wide: {0}")]
    Support(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("evaluation point (t={t}, x={x}, z={z}) lies outside the sampler domain")]
    OutOfDomain { t: f64, x: f64, z: f64 },

    #[error("numerical instability at t={t:e}: {detail}")]
    Instability { t: f64, detail: String },

    #[error("residual mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("law {0} needs time derivatives of the streamfunction")]
    MissingTendencies(&'static str),

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("inconsistent trajectory: {0}")]
    InconsistentTrajectory(String),

    #[error("invalid time step: {0}")]
    InvalidStep(String),

    #[error("malformed data file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
