//! Configuration, commands and reports for the `ifslab` tool.

pub mod commands;
pub mod config;
pub mod expr;
pub mod report;

pub use commands::{run, run_cli, Cli, Command, RunError};
pub use config::{load_config, paper_config, parse_config, LabConfig};
pub use report::{Outcome, Report};
