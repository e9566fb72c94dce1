//! Box bounds, evaluation records and the [`Problem`] trait shared by the
//! benchmark functions and the engineering design problems.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned search box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::Config("bounds must have at least one dimension".into()));
        }
        if let Some(k) = (0..lower.len()).find(|&k| !(lower[k] < upper[k])) {
            return Err(Error::Config(format!(
                "lower bound {} is not below upper bound {} in dimension {k}",
                lower[k], upper[k]
            )));
        }
        Ok(Self { lower, upper })
    }

    /// The same interval in every dimension.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Width of dimension `k`.
    pub fn width(&self, k: usize) -> f64 {
        self.upper[k] - self.lower[k]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            })
        }
    }
}

/// Result of evaluating one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub cost: f64,
    /// Inequality constraint values; feasible means every entry is `<= 0`.
    pub constraints: Vec<f64>,
    /// Set when the candidate was outside the problem's box.
    pub out_of_bounds: bool,
}

impl Evaluation {
    pub fn unconstrained(cost: f64, out_of_bounds: bool) -> Self {
        Self {
            cost,
            constraints: Vec::new(),
            out_of_bounds,
        }
    }

    /// Sum of positive constraint values.
    pub fn total_violation(&self) -> f64 {
        self.constraints.iter().map(|g| g.max(0.0)).fold(0.0, |s, v| s + v)
    }

    pub fn is_feasible(&self) -> bool {
        self.constraints.iter().all(|g| *g <= 0.0)
    }
}

/// A minimization problem over a box.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize {
        self.bounds().dim()
    }

    fn bounds(&self) -> &Bounds;

    /// Evaluates `x`. Stochastic objectives draw their noise from `noise`;
    /// deterministic ones never touch it.
    fn evaluate(&self, x: &[f64], noise: &mut dyn RngCore) -> Result<Evaluation>;

    /// Known optimum used for error measurements, if any.
    fn reference(&self) -> Option<f64>;

    /// Maps an optimizer position to the design actually evaluated
    /// (e.g. snapping discrete variables). Identity by default.
    fn decode(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }
}

pub(crate) fn finite_or(problem: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteResult {
            problem: problem.to_string(),
        })
    }
}
