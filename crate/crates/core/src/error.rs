use std::fmt;

use thiserror::Error;

/// Raw outcome of one counting trial, kept so that disagreeing runs can be
/// reported in full.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TrialRecord {
    /// Modulus used, or `None` for a run over the rationals.
    pub prime: Option<u32>,
    pub seed: u64,
    pub count: crate::groebner::QuotientDimension,
}

impl fmt::Display for TrialRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prime {
            Some(p) => write!(f, "(p={p}, seed={}, count={})", self.seed, self.count),
            None => write!(f, "(QQ, seed={}, count={})", self.seed, self.count),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("operands live in different polynomial rings")]
    RingMismatch,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("the ideal is the unit ideal")]
    UnitIdeal,

    #[error("ideal has no nonzero generators")]
    EmptyIdeal,

    #[error("codimension {codim} out of range for ambient dimension {ambient}")]
    CodimensionOutOfRange { codim: usize, ambient: usize },

    #[error("trials disagree: {}", format_trials(.trials))]
    NonGeneric { trials: Vec<TrialRecord> },

    #[error("critical locus is positive dimensional in every trial: {}", format_trials(.trials))]
    InfiniteCriticalLocus { trials: Vec<TrialRecord> },

    #[error("component {0} has a zero denominator")]
    ZeroDenominator(usize),

    #[error("camera {0} yields a constant-zero chart denominator")]
    DegenerateChart(usize),

    #[error("value {0} is not an integer")]
    NotInteger(String),

    #[error("class is not concentrated in top degree")]
    NotTopDegree,

    #[error("Milnor number did not stabilize up to degree {0}")]
    NotIsolated(u32),

    #[error("invalid modulus {0}: must be an odd prime below 2^32")]
    InvalidModulus(u64),

    #[error("denominator of {0} is divisible by the modulus {1}")]
    BadReduction(String, u32),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal error: {0}")]
    Internal(String),
}

fn format_trials(trials: &[TrialRecord]) -> String {
    trials
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
