//! Library half of the `igw-lab` binary: configuration parsing, the task
//! runners and the JSON report.

pub mod config;
pub mod report;
pub mod tasks;
