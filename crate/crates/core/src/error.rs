use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid probability profile: {0}")]
    InvalidProfile(String),

    #[error("vertex {vertex} has non-positive degree {degree}; regularize first")]
    ZeroDegree { vertex: usize, degree: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("second eigenvalue is degenerate (nearest neighbour at distance {gap:e})")]
    DegenerateGap { gap: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
