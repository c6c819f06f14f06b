use thiserror::Error;

/// Errors raised by digit extraction, orbit iteration and the experiment drivers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Refinement ran past the configured bit cap without separating the
    /// point from a branch or digit boundary.
    #[error("non-generic point: {bits} refinement bits did not determine the next {what}")]
    NonGenericPoint { bits: u32, what: &'static str },

    /// A terminating (rational) orbit ran out before the requested step.
    #[error("expansion exhausted after {steps} steps")]
    Exhausted { steps: usize },

    /// A digit or a digit sum no longer fits in 64 bits.
    #[error("digit arithmetic overflowed 64 bits")]
    DigitOverflow,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
