//! Command-line front end: run configuration, the reproduction suite,
//! report rendering and the JSON documents printed by each subcommand.

pub mod claims;
pub mod commands;
pub mod config;
pub mod report;

pub use claims::{registry, run_reproduce, ClaimResult};
pub use config::{Format, RunConfig};
pub use report::{emit_report, render};
