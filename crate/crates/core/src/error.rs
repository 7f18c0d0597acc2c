use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    /// A point or set was handed to an operation over a different space.
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    /// Malformed encoding or input value.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A bounded search ran out of fuel before it could produce a value.
    #[error("fuel exhausted after {steps} steps{}", level.map(|l| format!(" (deepest level reached: {l})")).unwrap_or_default())]
    Pending { steps: u64, level: Option<usize> },

    /// An operation needs a capability (Kolmogorov or overtness witness) the caller did not supply.
    #[error("missing witness: {0}")]
    MissingWitness(&'static str),

    /// The finite topology is not T0.
    #[error("space is not T0")]
    NotT0,

    /// An embedding inverse was applied to something outside the embedding's range.
    #[error("argument outside the range of the embedding: {0}")]
    OffRange(String),

    #[error("size {size} exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("unknown law id: {0}")]
    UnknownLaw(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn shape(expected: impl std::fmt::Debug, found: impl std::fmt::Debug) -> Self {
        Error::ShapeMismatch {
            expected: format!("{expected:?}"),
            found: format!("{found:?}"),
        }
    }

    pub(crate) fn pending(steps: u64) -> Self {
        Error::Pending { steps, level: None }
    }
}
