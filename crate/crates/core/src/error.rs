use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entropic order must be positive and finite (got {0})")]
    InvalidAlpha(f64),

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("order k = {k} is outside 1..={max}")]
    Index { k: usize, max: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("not a probability vector: {0}")]
    NotProbability(String),

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("POVM elements do not sum to the identity (max deviation {0:.3e})")]
    PovmIncomplete(f64),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("epsilon = {epsilon} exceeds the applicability threshold {threshold}")]
    InfeasibleEpsilon { epsilon: f64, threshold: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, Error>;
