use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank n = {0} (need n >= 2)")]
    InvalidRank(usize),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("malformed slot ({i},{j}): {reason}")]
    Malformed { i: usize, j: usize, reason: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("capacity guard: {0}")]
    Capacity(String),
    #[error("denominator vanishes at the evaluation point; pick another point")]
    VanishingDenominator,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_rank(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    Ok(())
}
