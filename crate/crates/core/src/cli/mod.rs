//! Batch runner: suites of checks, reports, and the command-line front end.

mod args;
mod config;
mod report;
mod suites;

pub use args::{parse_invocation, Cli, Invocation};
pub use config::{
    parse_config, OutputFormat, Overrides, RunConfig, Suite, MAX_N_MAX, MAX_QUAD_NODES,
};
pub use report::{emit, to_csv, to_json, CheckReport, Criterion, Measured, CSV_HEADER};
pub use suites::{checks, run_suite, Check, INVARIANT_COVERAGE};

/// Process exit status for a finished run.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}
