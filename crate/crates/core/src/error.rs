use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A data file could not be ingested. `row` is 1-based and counts the header.
    #[error("{source_name}: row {row}: {reason}")]
    Ingest {
        source_name: String,
        row: usize,
        reason: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Intensity bootstrap found no non-negative node value for this quote.
    #[error("negative intensity required at maturity {maturity:.4}y (quote #{index})")]
    NegativeIntensity { maturity: f64, index: usize },

    /// No volatility inside the allowed bounds zeroes the CDS price.
    #[error("no root in volatility bracket at maturity {maturity:.4}y (quote #{index})")]
    NoRootInBracket { maturity: f64, index: usize },

    #[error("target {target} outside attainable range [{low}, {high}]")]
    TargetOutOfRange { target: f64, low: f64, high: f64 },

    #[error("no convergence after {iterations} iterations: {trace}")]
    NoConvergence { iterations: usize, trace: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Ingest { .. } => "Ingest",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Domain(_) => "Domain",
            Error::NegativeIntensity { .. } => "NegativeIntensity",
            Error::NoRootInBracket { .. } => "NoRootInBracket",
            Error::TargetOutOfRange { .. } => "TargetOutOfRange",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::Io(_) => "Io",
        }
    }

    /// Maturity (in years) attached to calibration failures.
    pub fn maturity(&self) -> Option<f64> {
        match self {
            Error::NegativeIntensity { maturity, .. } | Error::NoRootInBracket { maturity, .. } => {
                Some(*maturity)
            }
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
