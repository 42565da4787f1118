//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A closure/subalgebra operation was handed an empty generating set.
    #[error("empty generating set")]
    EmptyGeneratingSet,

    /// Construction would exceed the documented carrier cap.
    #[error("size cap exceeded: {what} has {got} elements, cap is {cap}")]
    SizeCapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    /// An input that was assumed to be a median algebra / median metric
    /// turned out not to be one; carries a human-readable witness.
    #[error("internal consistency failure in {context}: {witness}")]
    InternalConsistency {
        context: &'static str,
        witness: String,
    },

    /// Validation of an input document failed (the run completed and found a
    /// violation, as opposed to the input being unreadable).
    #[error("validation failed: {0}")]
    Validation(String),

    /// A wall was asked to cross itself.
    #[error("crossing is undefined for a wall against itself")]
    SelfCrossing,

    /// Wall weighting does not cover the full wall set.
    #[error("missing wall length for wall {0}")]
    MissingWallLength(usize),

    /// interval_blocks and the diagonal cube need two distinct endpoints.
    #[error("diagonal cube endpoints must be distinct")]
    DegenerateDiagonal,

    /// A subset that must be closed under the median operation is not.
    #[error("subset is not median-closed: med({x},{y},{z}) leaves the subset")]
    NotMedianClosed { x: usize, y: usize, z: usize },

    /// Graph input must be connected.
    #[error("graph is disconnected: no path between vertices {0} and {1}")]
    DisconnectedGraph(usize, usize),

    /// Malformed tree edge list (wrong count, duplicate, self-loop, cycle).
    #[error("malformed tree edge list: {0}")]
    MalformedTree(String),

    /// A transformation passed to invariance_defect is not an isometry.
    #[error("transformation {index} is not an isometry: d({a},{b}) changes")]
    NotAnIsometry { index: usize, a: usize, b: usize },

    /// The basepoint of the tree resolver must belong to the subset.
    #[error("basepoint {0} is not a member of the subset A")]
    BasepointOutsideSubset(usize),

    /// Every wall length came out zero: the embedding map collapses M.
    #[error("wall length assignment failed: the map collapses M to a point")]
    CollapsedImage,

    /// Measured parallel-edge constants violate the a-priori bound implied by
    /// the resolver's reported quasi-morphism constant.
    #[error("a-priori parallel edge bound violated: {detail}")]
    AprioriBoundViolated { detail: String },

    /// Exhaustive mode was requested on a carrier above the documented cap.
    #[error("exhaustive mode refuses carrier of {got} points (cap {cap})")]
    ExhaustiveCapExceeded { got: usize, cap: usize },

    /// Anything wrong with an input document or CLI configuration.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit status: 1 for validation failures with a witness, 2 for
    /// malformed input / misuse, matching the documented contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::InternalConsistency { .. }
            | Error::AprioriBoundViolated { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
