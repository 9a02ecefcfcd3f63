use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable
/// machine-readable code via [`Error::code`], which the CLI prints.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("invalid coefficient window: {0}")]
    BadWindow(String),
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("matrix does not have full row rank")]
    RankDeficient,
    #[error("generator rows are not linearly independent over F_q[x]")]
    NotABasis,
    #[error("a code needs at least one generator row")]
    EmptyCode,
    #[error("the dual of a code of full rank is the zero module")]
    ZeroDual,
    #[error("scalar {0} is not a unit")]
    NotAUnit(u32),
    #[error("no codeword has a nonzero constant term")]
    EmptyConstraint,
    #[error("rank {r} is outside 1..={k}")]
    RankOutOfRange { r: usize, k: usize },
    #[error("tuple is not linearly independent over F_q[x]")]
    NotIndependent,
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("code is not MDS")]
    NotMds,
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("oracle enumeration of {needed} items exceeds the cap {cap}")]
    OracleTooLarge { needed: u128, cap: u128 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ZeroDivisor => "ZeroDivisor",
            Error::GcdOfZeros => "GcdOfZeros",
            Error::BadWindow(_) => "BadWindow",
            Error::ShapeError(_) => "ShapeError",
            Error::RankDeficient => "RankDeficient",
            Error::NotABasis => "NotABasis",
            Error::EmptyCode => "EmptyCode",
            Error::ZeroDual => "ZeroDual",
            Error::NotAUnit(_) => "NotAUnit",
            Error::EmptyConstraint => "EmptyConstraint",
            Error::RankOutOfRange { .. } => "RankOutOfRange",
            Error::NotIndependent => "NotIndependent",
            Error::BudgetExhausted(_) => "BudgetExhausted",
            Error::NotMds => "NotMDS",
            Error::NotApplicable(_) => "NotApplicable",
            Error::OracleTooLarge { .. } => "OracleTooLarge",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
