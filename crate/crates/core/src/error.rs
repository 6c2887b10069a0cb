use thiserror::Error;

/// Errors raised by validation, set algebra and file parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },

    #[error("element {element} in block {block} is out of range for a ground set of size {size}")]
    OutOfRange { element: usize, block: usize, size: usize },

    #[error("blocks overlap at element {element} (block {block})")]
    Overlap { element: usize, block: usize },

    #[error("ground sets differ: {left} vs {right} elements")]
    GroundMismatch { left: usize, right: usize },

    #[error("partition domains differ")]
    DomainMismatch,

    #[error("element set is not contained in the partition's domain")]
    NotSubset,

    #[error("factor {index} is trivial (exactly one block)")]
    TrivialFactor { index: usize },

    #[error("factor sizes multiply to {product}, but the set has {size} elements")]
    CardinalityMismatch { product: usize, size: usize },

    #[error("elements {first} and {second} have identical coordinates")]
    CoordinateCollision { first: usize, second: usize },

    #[error("factor partitions must cover the whole ground set")]
    PartialFactor { index: usize },

    #[error("event must be nonempty")]
    EmptyEvent,

    #[error("no value assigned to variable {0}")]
    MissingVariable(String),

    #[error("weights for factor {factor}: {reason}")]
    InvalidWeights { factor: usize, reason: String },

    #[error("unknown partition name `{0}`")]
    UnknownPartition(String),

    #[error("labeling has {got} entries, expected {expected}")]
    LabelingSize { got: usize, expected: usize },

    #[error("label {label} is outside the observation space of size {size}")]
    LabelOutOfRange { label: usize, size: usize },

    #[error("enumeration cap exceeded: {needed} partitions needed, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("{file}:{line}: {message} (at `{token}`)")]
    Parse {
        file: String,
        line: usize,
        token: String,
        message: String,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
