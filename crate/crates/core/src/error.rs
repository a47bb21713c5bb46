use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a group: {reason} (witness {witness:?})")]
    NotAGroup { reason: String, witness: Vec<usize> },

    #[error("{what} exceeds cap: {size} > {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("not a representation: deviation {deviation:.3e} at (g, h) = ({g}, {h})")]
    NotARepresentation { g: usize, h: usize, deviation: f64 },

    #[error("not a 2-cocycle: deviation {deviation:.3e} at {witness:?}")]
    NotACocycle { witness: [usize; 3], deviation: f64 },

    #[error("character inner product {value} is not within tolerance of an integer")]
    RoundingAmbiguous { value: String },

    #[error("operation requires a linear representation")]
    NotLinear,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("internal assertion failed: {0}")]
    AssertionFailure(String),

    #[error("action is not an algebra automorphism (element {element}, residual {residual:.3e})")]
    NotAnAutomorphism { element: usize, residual: f64 },

    #[error("intertwiner space for element {element} has dimension {dim}, expected 1")]
    NonSimpleAction { element: usize, dim: usize },

    #[error("tolerance failure: {0}")]
    ToleranceFailure(String),

    #[error("algebra is not semisimple: {0}")]
    NotSemisimple(String),

    #[error(
        "no central primitive idempotent matches the image of e_{index} under element {element}"
    )]
    MatchFailure { element: usize, index: usize },

    #[error("subspace is not a {side} ideal")]
    NotAnIdeal { side: &'static str },

    #[error(
        "invariant subspace lattice is infinite (isotypic multiplicity {multiplicity} present)"
    )]
    InfiniteLattice { multiplicity: usize },

    #[error("translated blocks do not form a direct sum (smallest singular value {0:.3e})")]
    BlocksNotDirect(f64),

    #[error("subalgebra is not central simple: {0}")]
    NotCentralSimple(String),

    #[error("tensor factor recovery failed for element {element}: second singular value ratio {ratio:.3e}")]
    FactorRecoveryFailure { element: usize, ratio: f64 },

    #[error("Weyl product is not an integer: {0}")]
    NonIntegerDimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at byte offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl Error {
    /// Cap and size-limit failures are distinguished from validation failures
    /// by the command-line front end.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::InfiniteLattice { .. }
        )
    }
}
