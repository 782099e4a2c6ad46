//! Experiment harness: dataset generation, batch and online experiment
//! orchestration, results CSV and table reporting.

pub mod config;
pub mod dataset;
pub mod online;
pub mod plan;
pub mod report;

pub use dataset::{build_dataset, DatasetSpec};
pub use online::{run_online, OnlineRun, OnlineRunParams, WindowResult};
pub use plan::{
    parse_results_csv, run_entries, run_plan, total_experiments, write_plot_data,
    write_results_csv, EntryResult, ExperimentPlan, RunParams, RESULTS_CSV_HEADER,
};

use thiserror::Error;

/// Harness-level failures, split by exit code: usage errors (exit 1) and
/// data or parse errors (exit 2).
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Usage(_) => 1,
            HarnessError::Data(_) => 2,
        }
    }
}

impl From<qlpsim_core::Error> for HarnessError {
    fn from(err: qlpsim_core::Error) -> Self {
        HarnessError::Data(err.to_string())
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(err: std::io::Error) -> Self {
        HarnessError::Data(err.to_string())
    }
}
