use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("objective count mismatch: expected {expected}, found {found}")]
    ObjectiveCountMismatch { expected: usize, found: usize },

    #[error("{op} supports at most {max} objectives, got {n}; {hint}")]
    UnsupportedObjectiveCount {
        op: &'static str,
        n: usize,
        max: usize,
        hint: &'static str,
    },

    #[error("front member {index} falls below the reference point in objective {objective}")]
    ReferencePointViolation { index: usize, objective: usize },

    #[error("need at least {needed} runs, got {found}")]
    NotEnoughRuns { needed: usize, found: usize },

    #[error("need at least {needed} members, got {found}")]
    NotEnoughMembers { needed: usize, found: usize },

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
