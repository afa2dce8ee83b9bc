//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("vector {index} has {got} entries, expected dimension {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },

    #[error("dimension {0} too small: {1}")]
    DimensionTooSmall(usize, &'static str),

    #[error("all vectors are zero")]
    AllZeroVectors,

    #[error("angle clustering ambiguous: centers {0} and {1} closer than twice the tolerance")]
    ClusterAmbiguity(String, String),

    #[error("polynomial degree {0} exceeds the supported maximum {1}")]
    DegreeTooLarge(usize, usize),

    #[error("quadrature degree {0} exceeds the supported maximum {1}")]
    QuadratureDegreeExceeded(usize, usize),

    #[error("empty index set (after removing the constant index)")]
    EmptyIndexSet,

    #[error("unknown design family `{0}`")]
    UnknownFamily(String),

    #[error("unknown builtin configuration `{0}`")]
    UnknownName(String),

    #[error("gramian is not Hermitian (max asymmetry {0})")]
    NonHermitianGramian(f64),

    #[error("configuration is not unit-norm (vector {index} has norm {norm})")]
    NonUnitNorm { index: usize, norm: f64 },

    #[error("expansion has complex coefficients; decomposition needs real ones")]
    ComplexCoefficients,

    #[error("not a potential: coefficient at {0} is {1}")]
    InvalidPotential(String, String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("polynomial vanishes at 1; cannot normalize")]
    ZeroAtOne,

    #[error("annihilator angle at 1 is not allowed")]
    AngleAtOne,

    #[error("outside validity domain: {0}")]
    OutOfValidityDomain(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("synthesis did not converge: best residual {0}")]
    DidNotConverge(f64),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
