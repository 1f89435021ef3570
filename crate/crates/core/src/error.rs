use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A table or sweep would exceed the configured memory ceiling.
    #[error("capacity exceeded: requested {requested}, ceiling is {ceiling}")]
    Capacity { requested: u64, ceiling: u64 },

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The normalising value `f(z)` vanishes.
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    /// A numerical procedure could not reach the requested precision.
    #[error("precision failure: {0}")]
    Precision(String),

    /// A power-series expansion was used outside its region of validity.
    #[error("expansion invalid: {0}")]
    ExpansionInvalid(String),

    /// A least-squares system is numerically singular.
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// An internal identity failed; this always indicates a bug.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
