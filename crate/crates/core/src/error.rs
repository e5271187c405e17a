use thiserror::Error;

/// Everything that can go wrong when constructing inputs or evaluating a sum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("modulus {p} exceeds the supported cap {cap}")]
    ModulusTooLarge { p: u64, cap: u64 },

    #[error("the zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    #[error("bad reduction: {0}")]
    BadReduction(String),

    #[error("degenerate parameter: {0}")]
    Degenerate(String),

    #[error("polynomial does not split into linear factors over F_p")]
    NotSplit,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown family id `{0}`")]
    UnknownFamily(String),

    #[error("conventions table: {0}")]
    Conventions(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
