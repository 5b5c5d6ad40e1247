use thiserror::Error;

/// Errors raised while building models or answering queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("variable `{0}` has an empty range")]
    EmptyRange(String),

    #[error("variable `{variable}` lists value `{value}` more than once")]
    DuplicateValue { variable: String, value: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("`{0}` is exogenous; only endogenous variables may appear here")]
    NotEndogenous(String),

    #[error("`{0}` is endogenous; only exogenous variables may appear in a context")]
    NotExogenous(String),

    #[error("value `{value}` is not in the range of `{variable}`")]
    ValueNotInRange { variable: String, value: String },

    #[error("variable `{0}` is assigned twice")]
    RepeatedAssignment(String),

    #[error("no equation for endogenous variable `{0}`")]
    MissingEquation(String),

    #[error("equation for `{0}` refers to its own target")]
    SelfReference(String),

    #[error("cyclic model: {}", .cycle.join(" -> "))]
    CyclicModel { cycle: Vec<String> },

    #[error("equation for `{variable}` yields `{value}` outside its range at {assignment}")]
    RangeViolation {
        variable: String,
        assignment: String,
        value: String,
    },

    #[error("equation for `{variable}` is ill-typed at {assignment}: {message}")]
    TypeError {
        variable: String,
        assignment: String,
        message: String,
    },

    #[error("equation for `{variable}` ranges over {combinations} parent assignments (limit {limit})")]
    DomainTooLarge {
        variable: String,
        combinations: u128,
        limit: u128,
    },

    #[error("context does not assign exogenous variable `{0}`")]
    IncompleteContext(String),

    #[error("settings do not share one signature")]
    SignatureMismatch,

    #[error("probability {0} is not strictly positive")]
    NonPositiveProbability(String),

    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(String),

    #[error("epistemic state has no settings")]
    EmptyEpistemicState,

    #[error("unknown action `{0}`")]
    UnknownAction(String),

    #[error("the action variable cannot be used here")]
    ActionVariableNotAllowed,

    #[error("cause candidate must contain at least one conjunct")]
    EmptyCandidate,

    #[error("{count} endogenous variables exceeds the cause-query cap of {cap}")]
    VariableCap { count: usize, cap: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("N = {n} must exceed the maximum action cost {max_cost}")]
    InvalidN { n: String, max_cost: String },

    #[error("M = {m} must exceed the maximum action cost {max_cost}")]
    InvalidM { m: String, max_cost: String },

    #[error("cost model has {0} axiom violation(s)")]
    InvalidCostModel(usize),

    #[error("reference set for action `{0}` is empty")]
    EmptyReferenceSet(String),

    #[error("outcome must be a conjunction of primitive events")]
    NotAConjunction,

    #[error("variable set must not be empty")]
    EmptyVariableSet,

    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("no setting {index}; the scenario has {count}")]
    NoSuchSetting { index: usize, count: usize },

    #[error("superset bound {max_k} is smaller than the queried set ({size} variables)")]
    SupersetBound { max_k: usize, size: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
