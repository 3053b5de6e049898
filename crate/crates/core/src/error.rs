use alloc::string::String;

use thiserror::Error;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input too short: {bits} bits need {needed} bytes, got {got}")]
    InputTooShort {
        bits: usize,
        needed: usize,
        got: usize,
    },
    #[error("invalid symbol {symbol:?} at index {index}")]
    Parse { index: usize, symbol: char },
    #[error("sequence of {0} bits is too short (need at least 2)")]
    SequenceTooShort(usize),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("zero sample variance: {0}")]
    ZeroVariance(String),
}

impl Error {
    /// True for errors caused by bad user input (as opposed to a numeric
    /// domain violation discovered while computing).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InputTooShort { .. }
                | Error::Parse { .. }
                | Error::SequenceTooShort(_)
                | Error::Config(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
