use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Pi2Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("pole at z = {z}: denominator {factor} evaluates to {value:e}")]
    Pole { z: String, factor: String, value: f64 },

    #[error("denominator {0} is not invertible modulo {1}")]
    NotInvertible(String, String),

    #[error("leading coefficient of the series is zero; cannot invert")]
    ZeroLeadingCoefficient,

    #[error("truncation shortfall: need coefficients through w^{needed}, have w^{available}")]
    TruncationShortfall { needed: i32, available: i32 },

    #[error("parity violation in R_{k}: expected {expected} structure")]
    Parity { k: usize, expected: &'static str },

    #[error("mu = {mu} is not admissible (bound M = {bound}): {reason}")]
    Inadmissible { mu: f64, bound: f64, reason: String },

    #[error("x = 0 is outside the domain of the asymptotic expansion")]
    ZeroAbscissa,

    #[error("expansion depth {requested} exceeds the available table depth {available}")]
    DepthExceeded { requested: usize, available: usize },

    #[error("Newton iteration failed at t = {t} after {iterations} iterations (max residual {residual:e})")]
    NewtonDivergence {
        t: f64,
        iterations: usize,
        residual: f64,
        profile: Vec<f64>,
    },

    #[error("singular matrix encountered at pivot column {0}")]
    SingularMatrix(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("series is not integrable at infinity: coefficient {coefficient:e} on |x|^({numerator}/3)")]
    DivergentTail { numerator: i32, coefficient: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Pi2Error>;
