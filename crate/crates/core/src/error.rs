use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("operands live over different ground structures")]
    GroundMismatch,

    #[error("invalid ground structure: {0}")]
    InvalidGround(String),

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("unknown block `{0}`")]
    UnknownBlock(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid clause: {0}")]
    InvalidClause(String),

    #[error("set is not open: {0}")]
    NotOpen(String),

    #[error("map is not total: {0}")]
    NotTotal(String),

    #[error("duplicate override for {0}")]
    DuplicateOverride(String),

    #[error("{0} requires a nonempty set")]
    EmptySet(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("integrity error: {0}")]
    Integrity(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
