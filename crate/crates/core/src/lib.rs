//! Chaotic sine cosine firefly optimizer, its baselines, benchmark and
//! engineering problems, and result statistics.

pub mod analysis;
pub mod chaos;
pub mod cscf;
pub mod engineering;
pub mod error;
pub mod firefly;
pub mod objectives;
pub mod problem;
pub mod record;
pub mod sca;

pub use chaos::{ChaoticMapKind, ChaoticMapState};
pub use cscf::{optimize, Algorithm, OptimizerConfig, Variant, VariantKind};
pub use engineering::{ConstrainedProblem, DesignKind, Fitness, PenaltyMode, PenaltyParams};
pub use error::{Error, Result};
pub use objectives::{BenchmarkId, ObjectiveProblem};
pub use problem::{Bounds, Evaluation, Problem};
pub use record::RunRecord;
