//! Config-driven experiment runner.

mod config;
mod report;
mod run;

pub use config::{Diagnostic, ExperimentConfig, ExperimentKind, NeighborhoodRule, SuperefficiencySection};
pub use report::{Report, ReportRow};
pub use run::{estimator_listing, function_listing, run, Overrides};
