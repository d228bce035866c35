use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("at least one candidate is required")]
    NoCandidates,
    #[error("at most {max} candidates are supported (got {got})")]
    TooManyCandidates { max: usize, got: usize },
    #[error("candidate {index} has {got} coordinates; the region has dimension {expected}")]
    Dimension { index: usize, expected: usize, got: usize },
    #[error("candidate {index} at {point:?} lies outside the region")]
    OutsideRegion { index: usize, point: Vec<f64> },
    #[error("candidates {first} and {second} occupy the same position")]
    DuplicateCandidates { first: usize, second: usize },
    #[error("the sample count must be at least 1")]
    ZeroSamples,
    #[error("{0}")]
    Precondition(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
