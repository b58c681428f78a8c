use thiserror::Error;

/// Errors raised by the numeric context, the field arithmetic, the series
/// catalog and the identity checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("requested precision of {digits} decimal digits is outside 1..={cap}")]
    PrecisionOutOfRange { digits: u64, cap: u64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("division by zero in Q(sqrt 5)")]
    DivisionByZeroField,

    #[error("unsupported abscissa x={0}: exact closed forms exist only for 1/5, 1/10 and 1/4")]
    UnsupportedAbscissa(String),

    #[error("abscissa x={0} is outside the open interval (0, 1)")]
    AbscissaOutOfRange(String),

    #[error("degenerate abscissa x={0}")]
    DegenerateAbscissa(String),

    #[error("index {index} is below the series start index {start}")]
    IndexBelowStart { index: u64, start: u64 },

    #[error("term budget of {budget} terms cannot certify {digits} digits{}", hint_suffix(.hint))]
    BudgetExceeded {
        budget: u64,
        digits: u32,
        hint: Option<String>,
    },

    #[error("context carries {available} digits but {required} are required")]
    PrecisionInsufficient { required: u64, available: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

fn hint_suffix(hint: &Option<String>) -> String {
    match hint {
        Some(h) => format!(" (hint: {h})"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
