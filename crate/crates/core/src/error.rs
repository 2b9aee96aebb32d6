use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("field mismatch between operands")]
    FieldMismatch,

    #[error("degree must be non-negative, got {0}")]
    NegativeDegree(i64),

    #[error("zero divisor at working precision {precision}")]
    ZeroDivisor { precision: String },

    #[error("not in the image of μ^{0}")]
    NotInMuImage(u32),

    #[error("exact inverse of a non-monomial needs a working precision")]
    UnboundedPrecision,

    #[error("element is indistinguishable from 0 at precision {0}")]
    ZeroAtPrecision(String),

    #[error("not a unit in the Tate algebra (residue is not a constant)")]
    NotAUnit,

    #[error("outside unit disk; use summand-level evaluation")]
    OutsideUnitDisk,

    #[error("polynomial is not monic in θ")]
    NotMonic,

    #[error("insufficient input precision: need {required}, have {available}")]
    InsufficientPrecision { required: String, available: String },

    #[error("outside logarithm domain (valuation must exceed -q/(q-1))")]
    OutsideLogDomain,

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: i64, bound: i64 },

    #[error("term budget exceeded: need {required}, budget {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("coefficient {0} cannot be expanded at the infinite place")]
    NotExpandable(String),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("coefficient ring mismatch")]
    RingMismatch,

    #[error("use a different particular solution; out of constructive range")]
    OutOfConstructiveRange,

    #[error("at most {max} t-variables are supported, got {got}")]
    TooManyVariables { max: usize, got: usize },

    #[error("variable index {0} out of range")]
    VariableOutOfRange(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}
