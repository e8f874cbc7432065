use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("invalid index set {idx:?} for n = {n}")]
    Index { idx: Vec<usize>, n: usize },

    #[error("frame is not orthonormal (defect {defect:.3e})")]
    NonOrthonormal { defect: f64 },

    #[error("matrix is not a rotation: {0}")]
    NotRotation(String),

    #[error("form is not self-dual (anti-self-dual part has norm {0:.3e})")]
    NotSelfDual(f64),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("json: {0}")]
    Json(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
