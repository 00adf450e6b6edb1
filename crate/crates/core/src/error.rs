use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate action `{0}`")]
    DuplicateAction(String),
    #[error("independence pair ({0}, {0}) is reflexive")]
    ReflexivePair(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("alphabet has {0} actions, at most {max} are supported", max = crate::alphabet::MAX_ACTIONS)]
    TooManyActions(usize),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("transition label `{0}` is outside the automaton's action set")]
    LabelOutsideActions(String),
    #[error("action set must be non-empty")]
    EmptyActionSet,
    #[error("dependent actions `{0}` and `{1}` share no process")]
    DependentPairUncovered(String, String),
    #[error("independent actions `{0}` and `{1}` share process {2}")]
    IndependentPairShared(String, String, usize),
    #[error("action `{0}` belongs to no process")]
    ActionUncovered(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("exploration exceeded the cap of {0} states")]
    CapExceeded(usize),
    #[error("{location}: {source}")]
    Invalid {
        location: String,
        #[source]
        source: Box<Error>,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("invalid parameters: {0}")]
    Params(String),
}

impl Error {
    pub(crate) fn at(self, location: impl Into<String>) -> Self {
        Error::Invalid {
            location: location.into(),
            source: Box::new(self),
        }
    }

    /// Strips location wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Invalid { source, .. } => source.root(),
            e => e,
        }
    }
}
