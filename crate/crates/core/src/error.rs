use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("event set is empty")]
    EmptyEventSet,
    #[error("generating family does not cover point {point}")]
    NonCoveringFamily { point: usize },
    #[error("index {index} out of range for carrier of size {n}")]
    OutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("relation is not antisymmetric: ({0}, {1}) and ({1}, {0}) both present")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive: ({0}, {1}), ({1}, {2}) present but ({0}, {2}) absent")]
    NotTransitive(usize, usize, usize),
    #[error("K relation is not antisymmetric: witness ({0}, {1})")]
    NotKCausal(usize, usize),
    #[error("subset is empty")]
    EmptySubset,
    #[error("carrier of size {n} exceeds enumeration cap {cap}")]
    CarrierTooLarge { n: usize, cap: usize },
    #[error("event {index} lies outside the model region or on a removed set")]
    EventOutsideRegion { index: usize },
    #[error("malformed model description: {0}")]
    MalformedSpec(String),
    #[error("sampling region too small: {0}")]
    RegionTooSmall(String),
    #[error("random sampling requires an explicit seed")]
    SeedRequired,
    #[error("model does not provide a closed-form {0} oracle")]
    UnsupportedOracle(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed dataset: {0}")]
    MalformedDataset(String),
}
