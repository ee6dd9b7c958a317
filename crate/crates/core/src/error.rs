use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("not a term order: {0}")]
    InvalidTermOrder(String),

    #[error("weight vector must be strictly positive: {0}")]
    NonPositiveWeight(String),

    #[error("weight entry {0} does not fit in a 64-bit order row")]
    WeightOverflow(String),

    #[error("Buchberger pair limit of {0} exceeded")]
    PairLimit(usize),

    #[error("reduction did not terminate within {0} steps; marking is not coherent")]
    ReductionLimit(usize),

    #[error("the ideal is the unit ideal")]
    UnitIdeal,

    #[error("ideal has no generators")]
    EmptyIdeal,

    #[error("inconsistent marking: {0}")]
    InconsistentMarking(String),

    #[error("empty or degenerate cone: {0}")]
    DegenerateCone(String),

    #[error("fan enumeration exceeded the limit of {0} cones")]
    ConeLimit(usize),

    #[error("fan graph is inconsistent: {0}")]
    InconsistentFan(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid document: {0}")]
    Document(String),
}
