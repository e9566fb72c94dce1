//! Sine cosine position update and its linear amplitude schedule.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Bounds;

/// Upper end of the phase draw `r2`.
pub const R2_MAX: f64 = 2.0 * PI;
/// Upper end of the destination weight draw `r3`.
pub const R3_MAX: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScaParams {
    /// Starting amplitude of the `r1` schedule.
    pub a_const: f64,
}

impl Default for ScaParams {
    fn default() -> Self {
        Self { a_const: 2.0 }
    }
}

impl ScaParams {
    pub fn validate(&self) -> Result<()> {
        if self.a_const > 0.0 && self.a_const.is_finite() {
            Ok(())
        } else {
            Err(Error::Config(format!("a_const must be positive, got {}", self.a_const)))
        }
    }
}

/// `A - iter * A / max_iter`, evaluated so both endpoints are exact.
pub fn r1_schedule(iter: usize, max_iter: usize, a_const: f64) -> f64 {
    debug_assert!(max_iter > 0 && iter <= max_iter);
    (a_const * (1.0 - iter as f64 / max_iter as f64)).max(0.0)
}

/// Coefficients for updating one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaDraw {
    /// Amplitude.
    pub r1: f64,
    /// Phase, in `[0, 2 pi]`.
    pub r2: f64,
    /// Destination weight, in `[0, 2]`.
    pub r3: f64,
    /// Branch switch: sine below 0.5, cosine otherwise.
    pub r4: f64,
}

impl ScaDraw {
    /// Uniform `r2`, `r3`, `r4` around a given amplitude.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, r1: f64) -> Self {
        let r2 = R2_MAX * rng.gen::<f64>();
        let r3 = R3_MAX * rng.gen::<f64>();
        let r4 = rng.gen::<f64>();
        Self { r1, r2, r3, r4 }
    }
}

/// One coordinate of the sine cosine update.
pub fn sca_update(x: f64, dest: f64, d: &ScaDraw) -> f64 {
    let wave = if d.r4 < 0.5 { d.r2.sin() } else { d.r2.cos() };
    x + d.r1 * wave * (d.r3 * dest - x).abs()
}

/// Applies `draws[k]` to coordinate `k` and clamps to `bounds`.
pub fn sca_step(x: &[f64], dest: &[f64], draws: &[ScaDraw], bounds: &Bounds) -> Result<Vec<f64>> {
    for len in [dest.len(), draws.len(), bounds.dim()] {
        if len != x.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                actual: len,
            });
        }
    }
    let mut next: Vec<f64> = x
        .iter()
        .zip(dest)
        .zip(draws)
        .map(|((xk, dk), d)| sca_update(*xk, *dk, d))
        .collect();
    bounds.clamp(&mut next);
    Ok(next)
}

/// [`sca_step`] with the same coefficients on every coordinate.
pub fn sca_step_uniform(x: &[f64], dest: &[f64], draw: ScaDraw, bounds: &Bounds) -> Result<Vec<f64>> {
    sca_step(x, dest, &vec![draw; x.len()], bounds)
}
