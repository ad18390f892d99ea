use alloc::boxed::Box;
use alloc::string::String;

use crate::shadowing::ShadowResult;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("orbit left the domain at iterate {index}")]
    OrbitEscape { index: i64 },

    #[error("splitting did not converge at orbit index {index} (residual {residual:.3e})")]
    DegenerateSplitting { index: i64, residual: f64 },

    #[error("pushed-forward basis lost rank at step {step}")]
    RankDeficient { step: usize },

    #[error("witness pseudo-orbit invalid: {0}")]
    WitnessInvalid(String),

    #[error("no accepted return within {budget} iterates")]
    NoRecurrence { budget: usize },

    #[error("no pool point within delta of the orbit after {budget} iterates")]
    PoolExhausted { budget: usize },

    #[error("Newton iteration diverged after {iterations} steps (residual {residual:.3e})")]
    NewtonDiverged {
        iterations: usize,
        residual: f64,
        best: Box<ShadowResult>,
    },

    #[error("linear solve pivot {pivot:.3e} below threshold at row {row}")]
    IllConditioned { row: usize, pivot: f64 },

    #[error("insufficient data: need {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("anchor is not hyperbolic (margin {margin:.3e})")]
    NonHyperbolicAnchor { margin: f64 },

    #[error("operation requires a torus domain")]
    DomainUnsupported,

    #[error("no near-return pairs within radius {radius:.3e}")]
    NoPairs { radius: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidSystem(_) => "InvalidSystem",
            Error::OrbitEscape { .. } => "OrbitEscape",
            Error::DegenerateSplitting { .. } => "DegenerateSplitting",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::WitnessInvalid(_) => "WitnessInvalid",
            Error::NoRecurrence { .. } => "NoRecurrence",
            Error::PoolExhausted { .. } => "PoolExhausted",
            Error::NewtonDiverged { .. } => "NewtonDiverged",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::NonHyperbolicAnchor { .. } => "NonHyperbolicAnchor",
            Error::DomainUnsupported => "DomainUnsupported",
            Error::NoPairs { .. } => "NoPairs",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// Orbit index the failure refers to, when there is one.
    pub fn orbit_index(&self) -> Option<i64> {
        match self {
            Error::OrbitEscape { index } | Error::DegenerateSplitting { index, .. } => Some(*index),
            Error::RankDeficient { step } => Some(*step as i64),
            Error::IllConditioned { row, .. } => Some((*row / 2) as i64),
            _ => None,
        }
    }
}

pub(crate) fn invalid(msg: &str) -> Error {
    Error::InvalidArgument(String::from(msg))
}
