use core::fmt;

/// Errors surfaced by parameter validation and the numerical oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter that must be a finite real was NaN or infinite.
    NonFinite { what: &'static str },
    /// A power ratio (SNR or INR) was negative.
    NegativePower { what: &'static str },
    /// `linear_to_db` requires a strictly positive argument.
    NonPositiveLinear { value_was_zero: bool },
    /// An operation was invoked outside its interference regime.
    RegimeMismatch {
        operation: &'static str,
        expected: &'static str,
        found: &'static str,
    },
    /// A correlation magnitude must lie in [0, 1].
    MagnitudeOutOfRange,
    /// A search grid needs at least two points per axis.
    DegenerateGrid { axis: &'static str },
    /// The lambda grid search requires INR > 0 (the objective is flat in
    /// lambda at INR = 0).
    ZeroInr,
    /// Too few Monte-Carlo samples for covariance estimation.
    TooFewSamples { samples: u64, min: u64 },
    /// A dB range was malformed (non-finite endpoints, step <= 0, or
    /// start > stop).
    InvalidRange { what: &'static str },
    /// Channel gains do not have the symmetric magnitude structure
    /// (all direct links one SNR, all cross links one INR).
    AsymmetricGains,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { what } => write!(f, "{what} must be finite"),
            Error::NegativePower { what } => write!(f, "{what} must be >= 0"),
            Error::NonPositiveLinear { .. } => {
                write!(f, "linear value must be > 0 to convert to dB")
            }
            Error::RegimeMismatch {
                operation,
                expected,
                found,
            } => write!(f, "{operation} applies to {expected}, got {found}"),
            Error::MagnitudeOutOfRange => write!(f, "correlation magnitude must be in [0, 1]"),
            Error::DegenerateGrid { axis } => {
                write!(f, "search grid needs at least 2 points along {axis}")
            }
            Error::ZeroInr => write!(f, "lambda search requires INR > 0"),
            Error::TooFewSamples { samples, min } => {
                write!(f, "samples too small for covariance estimation: {samples} < {min}")
            }
            Error::InvalidRange { what } => {
                write!(f, "invalid range for {what}: need finite start <= stop and step > 0")
            }
            Error::AsymmetricGains => {
                write!(f, "channel gains must have symmetric SNR/INR magnitudes")
            }
        }
    }
}

impl core::error::Error for Error {}
