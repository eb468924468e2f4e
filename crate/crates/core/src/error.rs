use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("matrix is not rectangular: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("negative probability mass {value} at index {index}")]
    NegativeMass { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("conditioning on a zero-probability symbol {symbol}")]
    ZeroProbabilityCondition { symbol: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("reproduction support does not match the supplied source symbols")]
    SupportMismatch,
    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("reproduction assigns zero mass to the realized symbol at position {position}")]
    ZeroMassAtRealization { position: usize },
    #[error("enumeration of {size} sequences exceeds the limit of {limit}")]
    EnumerationTooLarge { size: f64, limit: f64 },
    #[error("grid of {size} channels exceeds the limit of {limit}")]
    GridTooLarge { size: f64, limit: f64 },
    #[error("distortion budget {0} outside [0, 1]")]
    BudgetOutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("auxiliary channel solve did not reach a stationary point (best value {best})")]
    NonConvergence { best: f64 },
}

/// `v` if it is a finite number `≥ 0`.
pub(crate) fn nonnegative(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be a nonnegative number")))
    }
}

/// `v` if it is a finite number `> 0`.
pub(crate) fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be positive")))
    }
}
