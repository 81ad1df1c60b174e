use thiserror::Error;

use crate::text::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("empty text: at least one symbol is required")]
    EmptyText,

    #[error("substring [{start}, +{len}) is out of range for text of length {n}")]
    SubstringOutOfRange { start: usize, len: usize, n: usize },

    #[error("text length {n} exceeds the oracle size cap {cap}; use the suffix index instead")]
    SizeCapExceeded { n: usize, cap: usize },

    #[error("oracle definitions disagree on {repeat}: strict-count says {strict}, characterization says {characterized}")]
    DefinitionMismatch {
        repeat: String,
        strict: bool,
        characterized: bool,
    },

    #[error("text must end with a symbol occurring exactly once (last symbol {last:#x} occurs {count} times)")]
    MissingTerminator { last: Symbol, count: usize },

    #[error("terminator {0:#x} already occurs in the text")]
    TerminatorInUse(Symbol),

    #[error("no byte value is free to serve as a terminator")]
    NoFreeTerminator,

    #[error("cdawg size mismatch: {0}")]
    StatsMismatch(String),

    #[error("cdawg construction invariant violated: {0}")]
    CdawgInvariant(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
