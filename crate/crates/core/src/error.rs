use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside the domain of an operation (zero valuation argument,
    /// composite "prime", |r|_p != 1 where a unit is required, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation would exceed its big-integer or precision budget.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Factorization gave up with a composite cofactor still unsplit.
    #[error("incomplete factorization: cofactor {cofactor} left unsplit")]
    IncompleteFactorization { cofactor: BigUint },
    /// Probe configuration rejected (tail bound, delta hypothesis, grid).
    #[error("invalid configuration: {0}")]
    Config(String),
    /// An internal consistency check failed; indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
