use std::fmt;

/// Everything that can go wrong across the crate. Arithmetic on
/// well-formed inputs never fails; errors mark precondition violations,
/// parse failures and exhausted precision budgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    /// sqrt of a value with a nonzero odd-exponent coefficient
    NotASquare,
    PolyParse { pos: usize, found: String },
    WordParse { pos: usize, found: char },
    MorphismParse { detail: String },
    EmptyMorphismImage,
    /// fixed-point iteration needs image(a) = a... with length >= 2
    NonProlongable,
    InvalidAssignment { reason: &'static str },
    EmptyWord,
    /// the guaranteed window cannot certify the requested result
    PrecisionExhausted { context: &'static str },
    PrecisionTooSmall { required: usize },
    WindowTooSmall { required: usize, available: usize },
    InvalidConfig { reason: &'static str },
    /// a mined relation failed independent re-evaluation (internal guard)
    CertificationFailed,
    /// the operand must lie in the unit ball (zero polynomial part)
    NotFractional,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotASquare => write!(f, "not a square"),
            Error::PolyParse { pos, found } => {
                write!(f, "invalid polynomial at byte {pos}: {found:?}")
            }
            Error::WordParse { pos, found } => {
                write!(f, "invalid word at byte {pos}: {found:?} (expected 'a' or 'b')")
            }
            Error::MorphismParse { detail } => write!(f, "invalid morphism: {detail}"),
            Error::EmptyMorphismImage => write!(f, "morphism images must be nonempty"),
            Error::NonProlongable => {
                write!(f, "morphism is not prolongable: image of 'a' must start with 'a' and have length >= 2")
            }
            Error::InvalidAssignment { reason } => write!(f, "invalid letter assignment: {reason}"),
            Error::EmptyWord => write!(f, "word must be nonempty"),
            Error::PrecisionExhausted { context } => write!(f, "precision exhausted: {context}"),
            Error::PrecisionTooSmall { required } => {
                write!(f, "precision too small: need at least {required}")
            }
            Error::WindowTooSmall { required, available } => {
                write!(
                    f,
                    "series window too small: need {required} certified coefficients, have {available}"
                )
            }
            Error::InvalidConfig { reason } => write!(f, "invalid configuration: {reason}"),
            Error::CertificationFailed => {
                write!(f, "mined relation failed independent certification")
            }
            Error::NotFractional => {
                write!(f, "operand must have absolute value < 1 (zero polynomial part)")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
