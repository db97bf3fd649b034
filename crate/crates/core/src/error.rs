use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("action set is empty")]
    EmptyActionSet,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite input at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("negative link output at index {index}: {value}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("invalid link parameter: {0}")]
    InvalidLink(String),

    #[error("invalid action transformation: {0}")]
    InvalidTransformation(String),

    #[error("fixed point solver stopped at residual {residual:e} (tolerance {tolerance:e})")]
    FixedPointNotConverged { residual: f64, tolerance: f64 },

    #[error("invalid game tree at node {node}: {reason}")]
    InvalidTree { node: usize, reason: String },

    #[error("invalid game parameters: {0}")]
    InvalidGame(String),

    #[error("unknown game `{0}`")]
    UnknownGame(String),

    #[error("singular normal equations (lambda = {lambda}); use a positive regularizer")]
    SingularDesign { lambda: f64 },

    #[error("invalid feature parameters: {0}")]
    InvalidFeatures(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite regret at iteration {iteration}, info state `{infostate}`")]
    NonFiniteRegret { iteration: usize, infostate: String },

    #[error("checkpoint mismatch: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
