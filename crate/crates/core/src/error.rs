use thiserror::Error;

/// Errors produced by machine construction and the analyses built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("missing transition for state `{state}` on letter `{letter}`")]
    MissingTransition { state: String, letter: String },
    #[error("duplicate transition for state `{state}` on letter `{letter}`")]
    DuplicateTransition { state: String, letter: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("a machine needs at least one state")]
    EmptyStateSet,
    #[error("a machine needs at least one letter")]
    EmptyAlphabet,
    #[error("machine is not invertible")]
    NotInvertible,
    #[error("machine is not reversible")]
    NotReversible,
    #[error("machines act on different alphabets")]
    AlphabetMismatch,
    #[error("state set is not closed under transitions (`{from}` leaves it)")]
    NotClosed { from: String },
    #[error("exploration exceeded the budget of {0} state words")]
    BudgetExceeded(usize),
    #[error("edge label {child}/{parent} is not an integer")]
    NonIntegerLabel { parent: usize, child: usize },
    #[error("malformed orbit tree: {0}")]
    MalformedTree(String),
    #[error("edge levels are incompatible for a liftability test")]
    LevelMismatch,
    #[error("word of length {needed} exceeds orbit tree depth {depth}")]
    DepthExceeded { needed: usize, depth: usize },
    #[error("empty state word")]
    EmptyWord,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("unknown catalog key `{0}`")]
    UnknownKey(String),
}

pub type Result<T> = std::result::Result<T, Error>;
