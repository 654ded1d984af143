use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("maturity {maturity} precedes evaluation time {t}")]
    MaturityBeforeTime { t: f64, maturity: f64 },

    #[error("parameters not admissible: {0}")]
    NotAdmissible(String),

    #[error("negative hazard {value} at t = {t}")]
    NegativeHazard { t: f64, value: f64 },

    #[error("step {step} exceeds the smallest risky-time gap {gap}")]
    StepTooLarge { step: f64, gap: f64 },

    #[error("state {0:?} lies outside the state space")]
    StateOutsideDomain(Vec<f64>),

    #[error("missing atom premium g at risky time {0}")]
    MissingAtomPremium(f64),

    #[error("atom premium g(., {u}) jumps by {jump} at t = {u}")]
    PremiumDiscontinuity { u: f64, jump: f64 },

    #[error("{0} paths is too few for a martingale test (need at least 1000)")]
    Underpowered(usize),

    #[error("news update at t = {t} but the news time is {news_time}")]
    NewsTimeMismatch { t: f64, news_time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
