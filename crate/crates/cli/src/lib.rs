//! Verification harness over `k1hecke-core`: run configurations, named
//! suites, the raw census cache and the report formats.

pub mod cache;
pub mod config;
pub mod report;
pub mod suites;
pub mod tables;

pub use config::{ConfigError, GroupKind, RunConfig};
pub use report::{CheckRecord, Report, Status};
