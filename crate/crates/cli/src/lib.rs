//! Experiment runner for the `cscf` optimizer: seeded batch runs persisted as
//! JSON-lines records and convergence CSVs, and report tables over them.

pub mod experiment;
pub mod report;
pub mod run;

pub use experiment::{ConfigError, ExperimentSpec, Job, Overrides, ProblemSel};
pub use report::{cmd_report, ReportError, ReportSummary};
pub use run::{cmd_run, RunSummary};
