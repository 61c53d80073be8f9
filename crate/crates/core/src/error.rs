use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("formula outside the supported fragment: {0}")]
    UnsupportedFragment(String),
    #[error("wrong fragment: {0}")]
    WrongFragment(String),
    #[error("formula is not in negation normal form: {0}")]
    NotInNnf(String),
    #[error("formula is not in simple form: {0}")]
    NotSimpleForm(String),
    #[error("path formula uses past operators: {0}")]
    NotPureFuture(String),
    #[error("letter outside the alphabet: {0}")]
    LetterOutOfAlphabet(String),
    #[error("automaton is not a universal Büchi automaton")]
    NotUba,
    #[error("wrong automaton kind: {0}")]
    WrongKind(String),
    #[error("operation undefined for two-way automata")]
    TwoWayUnsupported,
    #[error("automaton is not a linear hesitant automaton: {0}")]
    NotLinearHesitant(String),
    #[error("state {0} lies in a transient component")]
    TransientComponent(String),
    #[error("automaton is not polarised and hesitant: {0}")]
    NotPolarisedHesitant(String),
    #[error("automaton is not a two-way linear HTA: {0}")]
    NotTwoWayLinear(String),
    #[error("visibility violated: {0}")]
    VisibilityViolated(String),
    #[error("fuel {given} below convergence bound {needed}")]
    InsufficientFuel { needed: usize, given: usize },
    #[error("normal form exceeds {0} clauses")]
    ClauseLimit(usize),
    #[error("transition monoid exceeds {0} elements")]
    MonoidTooLarge(usize),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("json: {0}")]
    Json(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
