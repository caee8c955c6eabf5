use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the solver, trainer or file layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument of a constitutive relation fell outside the model's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// The extended Jacobian stopped being diagonalizable with real eigenvalues.
    #[error("loss of hyperbolicity at interface {interface}: {detail}")]
    Hyperbolicity { interface: usize, detail: String },

    #[error("non-positive area {area:e} in cell {cell} at t = {time:.6} s")]
    Positivity { cell: usize, time: f64, area: f64 },

    #[error("time step {dt:e} s fell below the floor at t = {time:.6} s")]
    TimeStepFloor { dt: f64, time: f64 },

    #[error("boundary solve failed at the {side}: {detail}")]
    BoundarySolve { side: &'static str, detail: String },

    #[error("non-finite value in {term}")]
    NonFinite { term: String },

    #[error("{path}: row {row}: {detail}")]
    Schema { path: String, row: usize, detail: String },

    #[error("training aborted at epoch {epoch}: {detail} (last finite state saved to {checkpoint:?})")]
    TrainingAborted { epoch: usize, detail: String, checkpoint: Option<PathBuf> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
