//! Library side of the `phaselock` command: table generation, the
//! acceptance report, and output formatting.

pub mod config;
pub mod output;
pub mod report;
pub mod tables;

pub use config::{Format, RunConfig, DEFAULT_SEED};
