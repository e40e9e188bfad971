//! Recognition datasets over the bundled domains and evaluation metrics.

mod eval;
mod generate;
mod instances;
mod metrics;
mod templates;

use std::ops::RangeInclusive;
use std::path::Path;

pub use eval::{
    evaluate, load_dataset, write_dataset, DatasetEntry, DatasetFile, EvalProblem, EvalReport,
    GroupReport, LevelRow,
};
pub use generate::{generate_dataset, generate_problem, GenerateOptions, GeneratedProblem};
pub use instances::{BundledDomain, Instance};
pub use metrics::{metric_rates, ranked_first, Confusion, MetricRates, Outcome};
pub use templates::{
    instantiate_template, observation_count, sample_observations, Family, GoalTemplate,
};

use crate::pddl::PddlError;
use crate::recognizer::RecognizeError;

/// Observability levels, in percent.
pub const LEVELS: [u32; 5] = [10, 30, 50, 70, 100];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("{family} takes {expected:?} slots, got {found}")]
    Arity {
        family: Family,
        expected: RangeInclusive<usize>,
        found: usize,
    },
    #[error("no valid problem for {domain} / {family} ({name}) within the draw budget")]
    BudgetExhausted {
        domain: String,
        family: Family,
        name: String,
    },
    #[error(transparent)]
    Recognize(#[from] RecognizeError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
}

impl From<PddlError> for DatasetError {
    fn from(e: PddlError) -> Self {
        DatasetError::Recognize(e.into())
    }
}

impl DatasetError {
    pub(crate) fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        DatasetError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}
