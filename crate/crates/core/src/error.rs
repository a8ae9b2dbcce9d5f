use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown value `{value}` for variable `{variable}`")]
    UnknownValue { variable: String, value: String },

    #[error("invalid variable declaration: {0}")]
    InvalidVariable(String),

    #[error("formula `{0}` is unsatisfiable, no closest world exists")]
    NoClosestWorld(String),

    #[error("conditioning undefined: `{0}` has probability zero")]
    ConditioningUndefined(String),

    #[error("partiality violation: evidence gives positive probability to `{event}`, which has probability zero")]
    PartialityViolation { event: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid evidence: {0}")]
    InvalidEvidence(String),

    #[error("objects are defined over different spaces")]
    SpaceMismatch,

    #[error("infeasible interval specification: {0}")]
    InfeasibleSpec(String),

    #[error("interval specification too large: {free} free coordinates (limit {limit})")]
    TooLarge { free: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operator `{operator}` cannot be applied to {evidence} evidence")]
    OperatorMismatch { operator: String, evidence: String },

    #[error("invalid number `{0}`")]
    InvalidNumber(String),
}

impl Error {
    /// True for errors raised by an operator refusing its input, as opposed
    /// to malformed input.
    pub fn is_operator_precondition(&self) -> bool {
        matches!(
            self,
            Error::NoClosestWorld(_)
                | Error::ConditioningUndefined(_)
                | Error::PartialityViolation { .. }
                | Error::Precondition(_)
        )
    }
}
