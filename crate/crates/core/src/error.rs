use thiserror::Error;

use crate::semilattice::{AxiomViolation, Element};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown element {element} in a space of {size} elements")]
    UnknownElement { element: Element, size: usize },

    #[error("interval endpoints are not ordered: {lower} is not below {upper}")]
    NotOrdered { lower: Element, upper: Element },

    #[error("{0} requires a nonempty set")]
    EmptySet(&'static str),

    #[error("a product needs at least one factor")]
    NoFactors,

    #[error("invalid meet table: {}", fmt_violations(.violations))]
    InvalidMeetTable { violations: Vec<AxiomViolation> },

    #[error("function table has {found} values but the space has {expected} elements")]
    FunctionLength { expected: usize, found: usize },

    #[error("function is not quasi-Leontief: {0}")]
    NotQuasiLeontief(String),

    #[error("component {index} is not defined on factor {index} of the product")]
    FactorMismatch { index: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("piecewise-linear component: {0}")]
    Pwl(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("profile coordinate {player} = {element} lies outside the constraint set")]
    OutsideConstraints { player: usize, element: Element },

    #[error("operation needs a globally quasi-Leontief payoff model: {0}")]
    ModelMismatch(&'static str),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("profile is not a Nash point")]
    NotNash,

    #[error("operation requires unconstrained strategy sets (S_i = X_i)")]
    Constrained,

    #[error("profile count {required} exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("{location}: {message}")]
    Spec { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn spec(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            location: location.into(),
            message: message.into(),
        }
    }
}

fn fmt_violations(violations: &[AxiomViolation]) -> String {
    let shown: Vec<String> = violations.iter().take(3).map(|v| v.to_string()).collect();
    let mut out = shown.join("; ");
    if violations.len() > 3 {
        out.push_str(&format!(" (and {} more)", violations.len() - 3));
    }
    out
}
