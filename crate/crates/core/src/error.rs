use thiserror::Error;

/// Errors raised by the optimizer, its problems and the statistics layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{kind} map: seed {seed} is a fixed point of the map")]
    FixedPointSeed { kind: &'static str, seed: f64 },

    #[error("{kind} map: seed {seed} lies outside the admissible interval [{lo}, {hi}]")]
    SeedOutOfRange {
        kind: &'static str,
        seed: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{kind} map: orbit diverged to a non-finite value after {steps} steps")]
    DivergedOrbit { kind: &'static str, steps: u64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{problem}: objective produced a non-finite value")]
    NonFiniteResult { problem: String },

    #[error("partner agent {index} coincides with the moving or target agent")]
    SameAgent { index: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty sample")]
    EmptySample,

    #[error("all paired differences are zero")]
    AllZeroDifferences,

    #[error("pairwise comparison needs at least two groups, got {0}")]
    TooFewGroups(usize),

    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
