use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("label not in Λ: {0}")]
    UnknownLabel(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("invalid label set: {0}")]
    LabelSet(String),
    #[error("shape mismatch in {tensor}: expected {expected}, found {found}")]
    Shape {
        tensor: String,
        expected: String,
        found: String,
    },
    #[error("zero twist scalar at label {0}")]
    ZeroTwist(String),
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error("{0} is not invertible within tolerance")]
    Singular(String),
    #[error("vanishing E at label {0}")]
    VanishingE(String),
    #[error("S required")]
    SRequired,
    #[error("COF-chain calibration failure at label {label}: residual {residual:.3e}")]
    Calibration { label: String, residual: f64 },
    #[error("eigenvector extraction failed: {0}")]
    Eigen(String),
    #[error("no reconstruction fixed point: {0}")]
    FixedPoint(String),
    #[error("generator failed: {0}")]
    Generator(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
