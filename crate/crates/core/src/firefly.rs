//! Firefly light, attraction and movement kernels.
//!
//! Brightness is inverse cost: "brighter" means a better penalized fitness.
//! The random perturbation is `eta_k = (u_k - 1/2) * eta_scale * width_k / 10`
//! with `u_k` uniform on `[0, 1)`, one draw per coordinate in index order.
//! Moved positions are clamped to the box.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engineering::Fitness;
use crate::error::{Error, Result};
use crate::problem::Bounds;

/// Movement parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FireflyParams {
    /// Attractiveness at zero distance.
    pub alpha0: f64,
    /// Light absorption coefficient.
    pub beta: f64,
    /// Weight of the random perturbation.
    #[serde(rename = "j_step")]
    pub j: f64,
    /// Weight of the pull toward a random third agent.
    #[serde(rename = "k_step")]
    pub k: f64,
    pub eta_scale: f64,
}

impl Default for FireflyParams {
    fn default() -> Self {
        Self {
            alpha0: 1.0,
            beta: 1.0,
            j: 0.2,
            k: 0.2,
            eta_scale: 1.0,
        }
    }
}

impl FireflyParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha0 > 0.0
            && self.beta >= 0.0
            && self.j >= 0.0
            && self.k >= 0.0
            && self.eta_scale >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid firefly parameters {self:?}")))
        }
    }
}

/// One population member.
#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub position: Vec<f64>,
    /// Raw objective value.
    pub fitness: f64,
    pub penalized_fitness: Fitness,
    /// Consecutive non-improving updates.
    pub trial: u32,
}

impl Agent {
    pub fn is_brighter_than(&self, other: &Agent) -> bool {
        self.penalized_fitness.better_than(&other.penalized_fitness)
    }
}

/// `I0 * exp(-beta * d)`
pub fn light_intensity(i0: f64, beta: f64, d: f64) -> f64 {
    i0 * (-beta * d).exp()
}

/// `alpha0 * exp(-beta * d^2)`
pub fn attractiveness(alpha0: f64, beta: f64, d: f64) -> f64 {
    alpha0 * (-beta * d * d).exp()
}

/// Euclidean distance.
pub fn distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

fn check_index(population: &[Agent], i: usize) -> Result<&Agent> {
    population
        .get(i)
        .ok_or_else(|| Error::Config(format!("agent index {i} out of range")))
}

/// Attraction plus perturbation, before clamping.
fn attract<R: Rng + ?Sized>(
    x: &[f64],
    y: &[f64],
    params: &FireflyParams,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Vec<f64>> {
    bounds.check_dim(x)?;
    let beta = attractiveness(params.alpha0, params.beta, distance(x, y)?);
    Ok(x.iter()
        .zip(y)
        .enumerate()
        .map(|(k, (xk, yk))| {
            let eta = (rng.gen::<f64>() - 0.5) * params.eta_scale * bounds.width(k) / 10.0;
            xk + beta * (yk - xk) + params.j * eta
        })
        .collect())
}

/// Moves agent `x` toward agent `y`. The caller is responsible for `y`
/// being brighter; passing `y == x` leaves only the random perturbation.
pub fn move_standard<R: Rng + ?Sized>(
    population: &[Agent],
    x: usize,
    y: usize,
    params: &FireflyParams,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let px = &check_index(population, x)?.position;
    let py = &check_index(population, y)?.position;
    let mut next = attract(px, py, params, bounds, rng)?;
    bounds.clamp(&mut next);
    Ok(next)
}

/// Standard move plus `K * (a - x)` toward a third agent `a`.
pub fn move_improved<R: Rng + ?Sized>(
    population: &[Agent],
    x: usize,
    y: usize,
    a: usize,
    params: &FireflyParams,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if a == x || a == y {
        return Err(Error::SameAgent { index: a });
    }
    let px = &check_index(population, x)?.position;
    let py = &check_index(population, y)?.position;
    let pa = &check_index(population, a)?.position;
    let mut next = attract(px, py, params, bounds, rng)?;
    if params.k != 0.0 {
        for ((v, ak), xk) in next.iter_mut().zip(pa).zip(px) {
            *v += params.k * (ak - xk);
        }
    }
    bounds.clamp(&mut next);
    Ok(next)
}

/// Uniformly picks an index in `0..n` different from `x` and `y`.
pub fn pick_partner<R: Rng + ?Sized>(rng: &mut R, n: usize, x: usize, y: usize) -> Result<usize> {
    let excluded = if x == y { 1 } else { 2 };
    if n <= excluded {
        return Err(Error::Config(format!(
            "population of {n} has no third agent to pick"
        )));
    }
    let mut i = rng.gen_range(0..n - excluded);
    // shift past the excluded indices in ascending order
    for skip in [x.min(y), x.max(y)].into_iter().take(excluded) {
        if i >= skip {
            i += 1;
        }
    }
    Ok(i)
}
