use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NearnessError {
    #[error("element set belongs to a different poset")]
    InstanceMismatch,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("element identifiers must be non-empty")]
    EmptyIdentifier,
    #[error("order is not antisymmetric: `{0}` <= `{1}` and `{1}` <= `{0}`")]
    NotAntisymmetric(String, String),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("{what}: size {size} exceeds bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("not a frame: {0}")]
    NotAFrame(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("sampled family is not coinitial in the covers: {0}")]
    NotCoinitial(String),
    #[error("cannot parse input: {0}")]
    Parse(String),
    #[error("cannot read or write `{0}`")]
    Io(String),
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, NearnessError>;
