use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `start:` header line")]
    MissingStart,
    #[error("start symbol `{0}` does not occur in any rule")]
    UndeclaredStart(String),
    #[error("symbol `{0}` is used both as a terminal and as a nonterminal")]
    DuplicateSymbolKind(String),
    #[error("the grammar generates the empty language")]
    EmptyLanguage,
    #[error("the empty word is in the language")]
    EpsilonInLanguage,
    #[error("expected a proper grammar (no empty right-hand sides, no chain rules)")]
    NotProper,
    #[error("expected a grammar in quasi normal form")]
    NotQuasiNormalForm,
    #[error("expected a grammar in quasi Chomsky normal form")]
    NotQuasiChomsky,
    #[error("unknown nonterminal `{0}`")]
    UnknownNonterminal(String),
    #[error("letter `{0}` is not in the alphabet")]
    AlphabetViolation(char),
    #[error("group element specs differ: {0} vs {1}")]
    SpecMismatch(String, String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("growth fit needs at least 3 usable points, got {0}")]
    TooFewPoints(usize),
    #[error("{0}")]
    Invalid(String),
}
