//! Experiment runner, file formats and report tables on top of `qlearn-core`.

pub mod config;
pub mod experiments;
pub mod formats;
pub mod report;
pub mod trials;

pub use config::{ConfigOverrides, ExperimentConfig, ExperimentKind, LearnerKind, OutputFormat};
pub use experiments::{bench_suite, run, Report};
pub use report::{FormulaRow, ReportRow};
