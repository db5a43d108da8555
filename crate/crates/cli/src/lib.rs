//! Command-line front end: run reports, the orchestrated suites and the
//! `cone-rcb` subcommands.

pub mod cli;
pub mod report;
pub mod suite;

pub use report::{emit_json, emit_table, Format, Record, RunReport};
pub use suite::{run_suite, RunOptions, SuiteError};
