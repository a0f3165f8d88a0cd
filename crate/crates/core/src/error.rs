use std::fmt;

/// Everything that can go wrong inside the workbench.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{what}: size {size} exceeds the cap of {cap}")]
    SizeBound { what: String, size: u128, cap: u128 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("semantic error in `{name}`: {msg}")]
    Semantic { name: String, msg: String },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("ring `{0}` has no unit")]
    NotUnital(String),
    #[error("{op}: precondition violated: {msg}")]
    Precondition { op: &'static str, msg: String },
    #[error("{step}: search exhausted: {msg}")]
    SearchExhausted { step: String, msg: String },
    #[error("budget exceeded: {needed} operations requested, limit {limit}")]
    Budget { needed: u128, limit: u64 },
    #[error("ring `{ring}` is degenerate: {witness}")]
    Degenerate { ring: String, witness: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("probe {probe} outside the declared window [0, {window})")]
    OutsideWindow { probe: String, window: usize },
    #[error("ring `{ring}` is not semi-prime: left annihilator {left:?}, right annihilator {right:?}")]
    NotSemiprime { ring: String, left: Vec<usize>, right: Vec<usize> },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("stage {stage}: {inner}")]
    Stage { stage: usize, inner: Box<Error> },
}

impl Error {
    pub(crate) fn pre(op: &'static str, msg: impl fmt::Display) -> Self {
        Error::Precondition { op, msg: msg.to_string() }
    }

    pub(crate) fn exhausted(step: impl fmt::Display, msg: impl fmt::Display) -> Self {
        Error::SearchExhausted { step: step.to_string(), msg: msg.to_string() }
    }

    pub(crate) fn at_stage(self, stage: usize) -> Self {
        Error::Stage { stage, inner: Box::new(self) }
    }

    pub fn is_budget(&self) -> bool {
        match self {
            Error::Budget { .. } => true,
            Error::Stage { inner, .. } => inner.is_budget(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
