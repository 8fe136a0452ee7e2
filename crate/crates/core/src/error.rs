use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex set must be nonempty")]
    EmptySet,

    #[error("vertex sets must be disjoint")]
    OverlappingSets,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("sequence is not good: {0}")]
    NotGood(String),

    #[error("A_{index} is empty: the sequence is not realizable")]
    EmptyExtension { index: usize },

    #[error("z_{index} is not a member of A_{index}: the sequence cannot be sampled")]
    Infeasible { index: usize },

    #[error("graph has an odd cycle of length {found}, shorter than {required}")]
    OddGirthTooSmall { found: usize, required: usize },

    #[error("graph contains no cycle of length {0}")]
    NoCycle(usize),

    #[error("class {0} became empty")]
    EmptyClass(usize),

    #[error("contribution caps exceeded: {}", join(.0))]
    CapViolation(Vec<crate::certificate::CapViolation>),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
