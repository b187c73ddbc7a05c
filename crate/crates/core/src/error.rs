use thiserror::Error;

/// Errors raised by automaton construction, signature algebra and the game engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown counter `{0}`")]
    UnknownCounter(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("counter index {index} out of range (automaton has {count} counters)")]
    CounterOutOfRange { index: usize, count: usize },
    #[error("letter index {index} out of range (alphabet has {count} letters)")]
    LetterOutOfRange { index: usize, count: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("malformed automaton: {0}")]
    Structure(String),
    #[error("cap mismatch: {left} vs {right}")]
    CapMismatch { left: u32, right: u32 },
    #[error("cannot project signature of cap {cap} to larger cap {requested}")]
    CapTooLarge { cap: u32, requested: u32 },
    #[error("automaton alphabet is not a product alphabet")]
    NotProduct,
    #[error("class enumeration exceeded the budget of {budget} classes")]
    BudgetExhausted { budget: usize },
    #[error("class enumeration is incomplete")]
    IncompleteEnumeration,
    #[error("class {0} is not reachable")]
    UnreachableClass(usize),
    #[error("bound exponent {exponent} exceeds the display limit of {limit} bits")]
    BoundTooLarge { exponent: String, limit: u64 },
    #[error("round {round}: input strategy produced {got} letters, expected {expected}")]
    LengthViolation {
        round: usize,
        expected: u64,
        got: usize,
    },
    #[error("round {round}: {message}")]
    Contract { round: usize, message: String },
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("invalid delay function `{0}`")]
    DelayFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
