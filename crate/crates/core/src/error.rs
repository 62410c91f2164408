use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state {state} out of range for {n} states")]
    StateOutOfRange { state: usize, n: usize },
    #[error("universe mismatch: {left} vs {right} states")]
    UniverseMismatch { left: usize, right: usize },
    #[error("threshold m={m} must satisfy 1 <= m < n={n}")]
    BadThreshold { m: usize, n: usize },
    #[error("state count {n} exceeds supported maximum {max}")]
    TooManyStates { n: usize, max: usize },
    #[error("invalid letter {found:?} at position {position} (expected 'a' or 'b')")]
    BadLetter { found: char, position: usize },
    #[error("regex parse error at position {position}: {message}")]
    RegexParse { position: usize, message: String },
    #[error("pattern set must be nonempty and contain no empty pattern")]
    BadPatternSet,
    #[error("too many patterns: {count} (at most {max} supported)")]
    TooManyPatterns { count: usize, max: usize },
    #[error("optimal solution set exceeds cap of {cap} words")]
    EnumerationCapExceeded { cap: u64 },
    #[error("no optimal word satisfies all factor constraints")]
    ConstraintsUnsatisfiable,
    #[error("wrong family: expected {expected}, found {found}")]
    WrongFamily { expected: String, found: String },
    #[error("invalid automaton JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
