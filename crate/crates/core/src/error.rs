use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure classes. The CLI maps each class to a distinct exit status
/// and the C ABI maps it to a status code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Io,
    Parse,
    Validation,
    Structure,
    Conflict,
    Numeric,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Io => 1,
            ErrorKind::Parse => 3,
            ErrorKind::Validation => 4,
            ErrorKind::Structure => 5,
            ErrorKind::Conflict => 6,
            ErrorKind::Numeric => 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("frame has {size} outcomes; at most {limit} are supported here")]
    FrameTooLarge { size: usize, limit: usize },

    #[error("frames differ")]
    FrameMismatch,

    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),

    #[error("invalid mass assignment: {0}")]
    InvalidMass(String),

    #[error("{what} must sum to 1 (got {total})")]
    NotNormalized { what: String, total: f64 },

    #[error("not a belief function: inversion gives mass {mass} on {subset}")]
    NotBeliefFunction { subset: String, mass: f64 },

    #[error("total conflict between the combined belief functions")]
    TotalConflict,

    #[error("cannot condition on {0}: its plausibility is zero")]
    ConditioningOnImpossible(String),

    #[error("not partially consonant: foci {first} and {second} share a block but are not nested")]
    NotPcb { first: String, second: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("degenerate {0}: every component is zero")]
    Degenerate(&'static str),

    #[error("invalid binary utility <{lambda}, {rho}>: components must lie in [0,1] with max 1")]
    InvalidBinaryUtility { lambda: f64, rho: f64 },

    #[error("invalid t function: {0}")]
    InvalidT(String),

    #[error("invalid prize assignment: {0}")]
    InvalidPrizes(String),

    #[error("unknown prize `{0}`")]
    UnknownPrize(String),

    #[error("act `{act}` does not assign a prize to outcome `{outcome}`")]
    IncompleteAct { act: String, outcome: String },

    #[error("invalid act: {0}")]
    InvalidAct(String),

    #[error("invalid capacity: {0}")]
    InvalidCapacity(String),

    #[error("{name} = {value} is out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Io(_) => ErrorKind::Io,
            Parse(_) => ErrorKind::Parse,
            NotPcb { .. } | Domain(_) => ErrorKind::Structure,
            TotalConflict | ConditioningOnImpossible(_) => ErrorKind::Conflict,
            Degenerate(_) | NonFinite(_) => ErrorKind::Numeric,
            InvalidFrame(_)
            | FrameTooLarge { .. }
            | FrameMismatch
            | UnknownOutcome(_)
            | InvalidMass(_)
            | NotNormalized { .. }
            | NotBeliefFunction { .. }
            | InvalidDecomposition(_)
            | InvalidBinaryUtility { .. }
            | InvalidT(_)
            | InvalidPrizes(_)
            | UnknownPrize(_)
            | IncompleteAct { .. }
            | InvalidAct(_)
            | InvalidCapacity(_)
            | OutOfRange { .. }
            | InvalidProblem(_) => ErrorKind::Validation,
        }
    }
}
