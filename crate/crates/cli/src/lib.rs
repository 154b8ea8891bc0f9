//! Scenario-driven front end to the `modrabi` simulator: JSON scenarios with
//! explicit units in, JSON manifests and CSV tables out.

pub mod cli;
pub mod commands;
pub mod error;
pub mod output;
pub mod report;
pub mod scenario;
pub mod simulate;
pub mod units;

pub use error::CliError;
