use serde::{Deserialize, Serialize};

use crate::cscf::{Algorithm, Variant};

/// Outcome of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub algorithm: Algorithm,
    /// Chaos variant, for the hybrid only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    /// Chaotic map name, for the hybrid only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    pub dim: usize,
    #[serde(default)]
    pub replicate: u32,
    pub seed: u64,
    pub population: usize,
    pub max_iter: usize,
    pub best_position: Vec<f64>,
    /// Ordering value of the best solution: the cost under feasibility rules,
    /// the penalized cost under a static penalty.
    pub best_fitness: f64,
    pub best_cost: f64,
    #[serde(default)]
    pub best_violation: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub best_constraints: Vec<f64>,
    /// Best-so-far `best_fitness` after initialization and after each iteration.
    pub best_curve: Vec<f64>,
    /// Best-so-far total violation, aligned with `best_curve`; empty for
    /// unconstrained problems.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violation_curve: Vec<f64>,
    pub evals: u64,
    /// Seconds.
    pub wall_time: f64,
}

impl RunRecord {
    /// `ff`, `cscf-iv-circle`, ...
    pub fn label(&self) -> String {
        match (&self.variant, &self.map) {
            (Some(v), Some(m)) => format!("{}-{}-{}", self.algorithm, v, m),
            (Some(v), None) => format!("{}-{}", self.algorithm, v),
            _ => self.algorithm.to_string(),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.best_violation == 0.0
    }

    /// The best-so-far sequence never gets worse. For constrained runs the
    /// order is (violation, fitness), lexicographically.
    pub fn is_monotone(&self) -> bool {
        let violation = |i: usize| self.violation_curve.get(i).copied().unwrap_or(0.0);
        (1..self.best_curve.len()).all(|i| {
            let (v0, v1) = (violation(i - 1), violation(i));
            v1 < v0 || (v1 == v0 && self.best_curve[i] <= self.best_curve[i - 1])
        })
    }

    /// Copy with `wall_time` zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_time: 0.0,
            ..self.clone()
        }
    }
}
