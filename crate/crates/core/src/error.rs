use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {z} lies outside the disc |z - {center}| < {radius}")]
    OutsideDisc {
        z: Complex64,
        center: Complex64,
        radius: f64,
    },

    #[error("derivative order {order} exceeds truncation order {truncation}")]
    InsufficientTruncation { order: usize, truncation: usize },

    #[error("contour of radius {radius} around {z} reaches a singular set at distance {distance}")]
    Contour {
        z: Complex64,
        radius: f64,
        distance: f64,
    },

    #[error("leading coefficient {magnitude:e} is below the division threshold {threshold:e}")]
    NearZeroDivisor { magnitude: f64, threshold: f64 },

    #[error("evaluation at declared singularity {0}")]
    Singularity(Complex64),

    #[error("evaluation failed at {z}: {reason}")]
    Evaluation { z: Complex64, reason: String },

    #[error("degenerate hull: {0}")]
    DegenerateHull(String),

    #[error("point {point} is not on the hull boundary (distance {distance:e})")]
    NotOnBoundary { point: Complex64, distance: f64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("phase undefined for a zero value")]
    UndefinedPhase,

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
