//! Scenario files, batch execution and file export behind the
//! `swarm-landing` binary.

pub mod batch;
pub mod export;
pub mod scenario;

pub use batch::{aggregate, run_batch, run_batch_records, BatchAggregate, BatchRun, RunSummary};
pub use export::{
    emit_plot_data, export_trajectories, load_records, report, trajectories_csv, write_batch, BOUNDARIES_FILE,
    RECORD_FILE, SCATTER_FILE, SUMMARIES_FILE, TRACES_FILE, TRAJECTORIES_FILE,
};
pub use scenario::{load_scenario, parse_scenario, scenario_name, write_scenario};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

/// Process exit code for an error: 1 for bad input, 2 for anything that
/// fails while running.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Parse { .. } => EXIT_VALIDATION,
        _ => EXIT_RUNTIME,
    }
}
