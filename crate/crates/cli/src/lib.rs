//! Scenario runner and report formatting for the `qcalc` command.

pub mod builtin;
pub mod error;
pub mod format;
mod kinds;
pub mod report;
pub mod scenario;

pub use error::{CliError, Result};
pub use format::{emit_batch, emit_report, Format};
pub use report::{Report, Row};
pub use scenario::{run_scenario, RunOptions, Scenario};
