use thiserror::Error;

/// Errors raised across the library.
///
/// The CLI maps these onto its exit-code contract, see [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} is not supported (expected 2..=15)")]
    UnsupportedDegree(u32),
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {n}")]
    ReducibleModulus { n: u32, modulus: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("GF(2^{k}) is not a subfield of GF(2^{n})")]
    NotASubfield { n: u32, k: u32 },
    #[error("exponent sum is congruent to 0 modulo 2^{n}-1")]
    ZeroExponent { n: u32 },
    #[error("element {0:#x} does not belong to the field")]
    ElementOutOfRange(u32),

    #[error("affine map is not a permutation")]
    NotAPermutation,
    #[error("function has algebraic degree {0}, quadratic method needs degree <= 2")]
    NotQuadratic(u32),
    #[error("exhaustive and quadratic verifiers disagree: exhaustive uniformity {exhaustive}, max kernel {quadratic}")]
    MethodDisagreement { exhaustive: u32, quadratic: u32 },

    #[error("field degree {actual} does not match the required degree {expected}")]
    FieldMismatch { expected: u32, actual: u32 },
    #[error("invalid (k, s) = ({k}, {s}): {reason}")]
    InvalidKS { k: u32, s: u32, reason: String },
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("form specialization needs n = 6, got n = {0}")]
    WrongDegree(u32),
    #[error("{name} is not defined on GF(2^{n})")]
    UnsupportedOnThisField { name: String, n: u32 },
    #[error("q must be nonzero")]
    ZeroQ,

    #[error("code of dimension {rank} exceeds the enumeration budget of {budget}")]
    BudgetExceeded { rank: u32, budget: u32 },

    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Exit code: 2 bad input, 3 internal disagreement, 4 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MethodDisagreement { .. } => 3,
            Error::BudgetExceeded { .. } => 4,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
