use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two families: input problems (bad arguments, malformed
/// encodings, violated preconditions) and internal inconsistencies, which
/// indicate a bug rather than a bad request. [`Error::is_internal`] tells them
/// apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ZeroValuation,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("use dyadic defect: the Legendre symbol needs an odd prime")]
    EvenPrime,
    #[error("unit required: {0} is even")]
    NotAUnit(BigInt),
    #[error("no prime found within bound {bound}")]
    PrimeSearchExhausted { bound: u64 },
    #[error("degenerate quadratic form")]
    Degenerate,
    #[error("zero form")]
    ZeroForm,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("zero argument to the Hilbert symbol")]
    ZeroArgument,
    #[error("odd total ramification")]
    OddRamification,
    #[error("{0} is not squarefree")]
    NotSquarefree(BigInt),
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("generators do not span a full lattice")]
    NotFullRank,
    #[error("not an order: {0}")]
    NotAnOrder(String),
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("catalog incomplete: {0}")]
    CatalogIncomplete(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that signal a broken invariant inside the library.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::CatalogIncomplete(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
