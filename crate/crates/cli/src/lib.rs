//! Batch front end: spec-file driven pipelines with text and JSON reports.

pub mod commands;
pub mod report;

pub use commands::{cmd_bracket, cmd_cohomology, cmd_deform, cmd_gauge, cmd_verify, error_exit_code, DeformArgs};
pub use report::{Check, Report, Status};
