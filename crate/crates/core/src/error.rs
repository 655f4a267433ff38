use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("operator pole at sample (|p| = {0:e})")]
    OperatorPole(f64),
    #[error("pole on test set (|denominator| = {0:e})")]
    PoleOnTestSet(f64),
    #[error("formula degenerate for these (lambda, G, H)")]
    DegenerateFormula,
    #[error("domain too thin, refine grid ({excluded} of {total} points are poles)")]
    DomainTooThin { excluded: usize, total: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("empty sample list")]
    EmptySamples,
    #[error("rejection budget exhausted after {0} draws (amplitude too large)")]
    RejectionBudget(usize),
    #[error("zero of f on the check circle")]
    ZeroOnCircle,
    #[error("invalid analytic sample: {0}")]
    InvalidSample(String),
    #[error("coefficient file: {0}")]
    CoefficientFile(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
