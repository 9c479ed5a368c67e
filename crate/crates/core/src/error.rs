use thiserror::Error;

/// Errors raised anywhere in the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("duplicate branch label `{label}`")]
    DuplicateLabel { label: String },

    #[error("polarity mismatch in `{connective}`: {detail}")]
    Polarity { connective: String, detail: String },

    #[error("sequent `{turnstile}` expects {expected}, found {found}")]
    SequentKind {
        turnstile: &'static str,
        expected: &'static str,
        found: String,
    },

    #[error("there are no morphisms from a player game to an opponent game")]
    NoMorphismDirection,

    #[error("expansion budget of {budget} nodes exceeded ({produced} nodes produced)")]
    BudgetExceeded { produced: u64, budget: u64 },

    #[error("time limit of {limit_ms} ms exceeded")]
    Timeout { limit_ms: u64 },

    #[error("connective `{connective}` is not supported here")]
    Unsupported { connective: &'static str },

    #[error("{rule} rule does not apply at {path}: {msg}")]
    Type {
        rule: &'static str,
        path: String,
        msg: String,
    },

    #[error("term is not in normal form: {0}")]
    NotNormal(String),

    #[error("rewriting is stuck at `{0}`")]
    Stuck(String),

    #[error("rewrite step budget of {0} exhausted")]
    StepBudget(u64),

    #[error("engines disagree: {0}")]
    Disagreement(String),

    #[error("strategy does not match the hom game at {path}: {msg}")]
    ShapeMismatch { path: String, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
