use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid component count {0}: must be between 1 and {max}", max = crate::landscape::MAX_COMPONENTS)]
    InvalidComponentCount(usize),

    #[error("invalid interaction degree k={k} for n={n}: need 0 <= k <= n-1")]
    InvalidInteractionDegree { n: usize, k: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("genotype has {actual} components, landscape expects {expected}")]
    GenotypeArity { expected: usize, actual: usize },

    #[error("component index {index} out of range for n={n}")]
    ComponentIndex { index: usize, n: usize },

    #[error("exhaustive enumeration of 2^{0} genotypes exceeds the guard of 2^30")]
    EnumerationTooLarge(usize),

    #[error("search mask is empty")]
    EmptyMask,

    #[error("cannot assemble decision: {0}")]
    Assembly(String),

    #[error("invalid scenario field `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("cannot parse scenario config: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }
}
