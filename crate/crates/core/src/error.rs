use thiserror::Error;

/// Errors produced by the arithmetic, graph and construction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a value of at least {min}, got {got}")]
    TooSmall { min: u64, got: u64 },

    #[error("{0} exceeds the supported ceiling 2^63 - 1")]
    AboveCeiling(u128),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not square-free")]
    NotSquareFree(u64),

    #[error("{0} does not have the delta property")]
    NotMember(u64),

    #[error("({x}, {y}, {z}) is not a delta-triple for {n}")]
    NotDeltaTriple { n: u64, x: u64, y: u64, z: u64 },

    #[error("invalid argument: {0}")]
    Invalid(String),

    /// An identity that is proven to hold was observed to fail. Seeing this
    /// means the implementation is wrong.
    #[error("identity violated: {0}")]
    Falsified(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
