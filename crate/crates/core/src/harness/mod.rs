//! Experiment configs, the built-in fixtures and report output.

use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::conditions::ConditionError;
use crate::maps::MapError;
use crate::metric::MetricError;
use crate::sequence::SequenceError;
use crate::solver::SolverError;

pub mod config;
pub mod fixtures;
pub mod output;
pub mod run;

pub use config::{
    ApproxPoint, EstimateExpectation, Expectations, ExperimentConfig, OutputFormat, Outputs, Range,
    Theorem,
};
pub use fixtures::{
    fixture_config, remark_2_5, run_fixture, FixtureReport, RemarkReport, FIXTURE_NAMES,
};
pub use output::{write_atomic, write_json, write_report};
pub use run::{
    classify_experiment, run_experiment, ExpectationOutcome, ExperimentReport, RunReport,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid config field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("unknown fixture `{0}` (known: example_3_15, example_3_16, example_3_17, remark_2_5)")]
    UnknownFixture(String),
    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}
