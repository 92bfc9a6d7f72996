use thiserror::Error;

/// Errors raised by the library.
///
/// `Invariant` marks a violated internal identity (an oracle disagreement or a
/// non-monomial root number); everything else is a precondition failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic context mismatch: order {0} vs {1}")]
    ContextMismatch(usize, usize),
    #[error("root of unity of order {order} does not fit in Q(zeta_{modulus})")]
    OrderOverflow { order: u64, modulus: usize },
    #[error("precision exhausted: need {needed} coefficients, window is {window}")]
    PrecisionExhausted { needed: usize, window: usize },
    #[error("zero argument")]
    ZeroArgument,
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for internal invariant violations (bug signals).
    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
