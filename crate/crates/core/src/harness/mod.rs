//! Experiment harness: configuration, sweeps, reports and verification
//! suites.

pub mod config;
pub mod suites;
pub mod sweep;

pub use config::{ExperimentConfig, Quantity, WeightSpec};
pub use suites::{verify_suite, verify_suite_seeded, SuiteReport, SUITES};
pub use sweep::{csv_string, run_sweep, without_runtime, write_csv, write_json, ReportRow, CSV_COLUMNS};
