use alloc::string::String;

/// Configuration errors raised when constructing distributions, channel
/// parameters or codebooks. Violated preconditions on already-validated
/// values (dimension mismatches, out-of-range indices) panic instead.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid sampling distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),
    #[error("invalid code configuration: {0}")]
    Configuration(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
