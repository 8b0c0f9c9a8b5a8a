//! Parameter spaces, shipped presets, and a racing configurator.

mod presets;
mod race;
mod space;

pub use presets::{preset, PRESET_COLUMNS};
pub use race::{race, race_candidates, RaceOutcome, RaceSettings, RaceState};
pub use space::{sample_config, ParamConfig, ParamKind, ParamSpace, ParamSpec, Provenance};

use crate::algorithm::Algorithm;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TunerError {
    #[error("{0} has no tunable parameters")]
    UnknownAlgorithm(Algorithm),
    #[error("no preset column '{0}'")]
    NoSuchColumn(String),
    #[error("budget of {budget} runs is below the required {required}")]
    BudgetTooSmall { budget: usize, required: usize },
    #[error("racing needs at least 2 candidates, got {0}")]
    TooFewCandidates(usize),
    #[error("racing needs at least one instance")]
    NoInstances,
    #[error("candidate configs mix algorithms")]
    MixedAlgorithms,
    #[error("parameter '{name}' = {value} outside [{lo}, {hi}]")]
    OutOfRange { name: String, value: f64, lo: f64, hi: f64 },
    #[error("unknown parameter '{0}'")]
    UnknownParameter(String),
    #[error("missing parameter '{0}'")]
    MissingParameter(String),
    #[error("bad training instance: {0}")]
    Instance(String),
    #[error("invalid config document: {0}")]
    Format(String),
}
