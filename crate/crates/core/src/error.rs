use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed algebra document: {0}")]
    Malformed(String),

    #[error("entry out of range: operation `{op}` entry {value} at index {index} (size {size})")]
    EntryOutOfRange {
        op: String,
        index: usize,
        value: usize,
        size: usize,
    },

    #[error("table length mismatch: operation `{op}` of arity {arity} has {found} entries, expected {expected}")]
    TableLength {
        op: String,
        arity: usize,
        expected: usize,
        found: usize,
    },

    #[error("duplicate operation name `{0}`")]
    DuplicateOperation(String),

    #[error("term syntax error: {0}")]
    TermSyntax(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("operation `{0}` is not in the signature")]
    UnknownOperation(String),

    #[error("operation `{name}` applied to {found} arguments, arity is {arity}")]
    ArityMismatch {
        name: String,
        arity: usize,
        found: usize,
    },

    #[error("signature mismatch between `{0}` and `{1}`")]
    SignatureMismatch(String, String),

    #[error("element {element} out of range for algebra of size {size}")]
    ElementOutOfRange { element: usize, size: usize },

    #[error("not a partition of 0..{size}: {reason}")]
    NotAPartition { size: usize, reason: String },

    #[error("partition is not a congruence: ({x},{y}) identified but `{op}` separates {fx} and {fy}")]
    NotACongruence {
        op: String,
        x: usize,
        y: usize,
        fx: usize,
        fy: usize,
    },

    #[error("congruences belong to different algebras")]
    ParentMismatch,

    #[error("not a homomorphism: `{op}` fails at arguments {args:?}")]
    NotAHomomorphism { op: String, args: Vec<usize> },

    #[error("map is not an isomorphism: {0}")]
    NotAnIsomorphism(String),

    #[error("congruence is not above the base congruence: ({x},{y}) in base but not in argument")]
    NotAbove { x: usize, y: usize },

    #[error("resource budget exceeded: {what} needs {needed}, limit {limit}")]
    Budget {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("not a Church algebra for this witness: {0}")]
    NotChurch(String),

    #[error("no complement available: {0}")]
    NoComplement(String),

    #[error("sequence did not stabilize within {0} steps")]
    NoStabilization(usize),

    #[error("base algebra is not directly indecomposable: {0}")]
    Decomposable(String),

    #[error("infimum not representable: {0}")]
    InfimumNotRepresentable(String),

    #[error("invalid periodic set: {0}")]
    PeriodicSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
