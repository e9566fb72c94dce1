//! The twenty-function benchmark suite.
//!
//! The evaluators use the canonical literature forms:
//!
//! | id | function | note |
//! |----|----------|------|
//! | fn3 | `30 + sum floor(x)` | optimum `30 - 6D` on `[-5.12, 5.12]` |
//! | fn8 | step, `sum floor(x + 0.5)^2` | the listed optimum -3.214 is unreachable for a sum of squares |
//! | fn11 | six-hump camel (`+4 x2^4`) | uses the first two coordinates |
//! | fn12 | Goldstein-Price | uses the first two coordinates |
//! | fn13 | Shekel, 10 foxholes | uses the first four coordinates |
//! | fn16 | `max abs(x)` | the listed optimum 1 does not match `max x` |
//! | fn17 | Rosenbrock on `[-30, 30]` | |
//! | fn18 | Hartmann 6 | uses the first six coordinates |
//! | fn19, fn20 | penalized functions with [`penalty_u`] | |
//!
//! Fixed-dimension functions accept any `dim` at least as large as their
//! natural dimension; extra coordinates are inert. Commonly reported minima
//! are kept as [`ObjectiveProblem::reported_minimum`] metadata and
//! never used for scoring.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{finite_or, Bounds, Evaluation, Problem};

/// Index `1..=20` of a benchmark function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct BenchmarkId(u8);

struct Row {
    name: &'static str,
    lo: f64,
    hi: f64,
    min_dim: usize,
}

const ROWS: [Row; 20] = [
    Row { name: "ackley", lo: -30.0, hi: 30.0, min_dim: 1 },
    Row { name: "griewank", lo: -600.0, hi: 600.0, min_dim: 1 },
    Row { name: "floor_sum", lo: -5.12, hi: 5.12, min_dim: 1 },
    Row { name: "log_sine", lo: 0.25, hi: 10.0, min_dim: 1 },
    Row { name: "quintic", lo: -10.0, hi: 10.0, min_dim: 1 },
    Row { name: "sphere", lo: -100.0, hi: 100.0, min_dim: 1 },
    Row { name: "schwefel_1_2", lo: -100.0, hi: 100.0, min_dim: 1 },
    Row { name: "step", lo: -10.0, hi: 10.0, min_dim: 1 },
    Row { name: "sine_root", lo: -5.12, hi: 5.12, min_dim: 1 },
    Row { name: "rastrigin", lo: -200.0, hi: 200.0, min_dim: 1 },
    Row { name: "six_hump_camel", lo: -5.0, hi: 5.0, min_dim: 2 },
    Row { name: "goldstein_price", lo: -3.0, hi: 3.0, min_dim: 2 },
    Row { name: "shekel", lo: 0.0, hi: 20.0, min_dim: 4 },
    Row { name: "noisy_quartic", lo: -1.28, hi: 1.28, min_dim: 1 },
    Row { name: "schwefel_2_26", lo: -500.0, hi: 500.0, min_dim: 1 },
    Row { name: "schwefel_2_21", lo: -600.0, hi: 600.0, min_dim: 1 },
    Row { name: "rosenbrock", lo: -30.0, hi: 30.0, min_dim: 2 },
    Row { name: "hartmann6", lo: 0.0, hi: 1.0, min_dim: 6 },
    Row { name: "penalized1", lo: -50.0, hi: 50.0, min_dim: 1 },
    Row { name: "penalized2", lo: -50.0, hi: 50.0, min_dim: 1 },
];

/// Dimension used by the suite.
pub const DEFAULT_DIM: usize = 20;

const SCHWEFEL_226_MIN: f64 = -418.982_887_272_433_74;
const SIX_HUMP_MIN: f64 = -1.031_628_453_489_877;
const SHEKEL_MIN: f64 = -10.536_409_816_692_045;
const HARTMANN6_MIN: f64 = -3.322_368_011_415_515;

const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];
const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

const HARTMANN_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HARTMANN_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HARTMANN_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

impl BenchmarkId {
    pub fn new(index: u8) -> Result<Self> {
        if (1..=20).contains(&index) {
            Ok(Self(index))
        } else {
            Err(Error::UnknownName {
                what: "benchmark",
                name: format!("fn{index}"),
            })
        }
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (1..=20).map(Self)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    fn row(self) -> &'static Row {
        &ROWS[self.0 as usize - 1]
    }

    pub fn name(self) -> &'static str {
        self.row().name
    }

    /// Smallest dimension the function is defined for.
    pub fn min_dim(self) -> usize {
        self.row().min_dim
    }

    pub fn range(self) -> (f64, f64) {
        (self.row().lo, self.row().hi)
    }

    /// True for the one stochastic function.
    pub fn is_noisy(self) -> bool {
        self.0 == 14
    }

    /// Known global minimum in dimension `dim`.
    pub fn reference(self, dim: usize) -> f64 {
        let d = dim as f64;
        match self.0 {
            3 => 30.0 - 6.0 * d,
            4 => -d,
            9 => d * -5.12 * 5.12f64.sqrt().sin(),
            11 => SIX_HUMP_MIN,
            12 => 3.0,
            13 => SHEKEL_MIN,
            15 => d * SCHWEFEL_226_MIN,
            18 => HARTMANN6_MIN,
            _ => 0.0,
        }
    }

    /// Commonly reported optimum, where one is given.
    pub fn reported_minimum(self, dim: usize) -> f64 {
        let d = dim as f64;
        match self.0 {
            3 => -6.0 * d + 30.0,
            4 => -d,
            8 => -3.214,
            11 => -1.6428,
            12 => 3.0,
            13 => -10.4673,
            16 => 1.0,
            17 => -209.0,
            18 => -3.33,
            _ => 0.0,
        }
    }
}

impl From<BenchmarkId> for u8 {
    fn from(id: BenchmarkId) -> u8 {
        id.0
    }
}

impl TryFrom<u8> for BenchmarkId {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        Self::new(v)
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fn{}", self.0)
    }
}

impl FromStr for BenchmarkId {
    type Err = Error;

    /// Accepts `fnN` or a function name such as `ackley`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        if let Some(n) = key.strip_prefix("fn").and_then(|r| r.parse::<u8>().ok()) {
            return Self::new(n);
        }
        ROWS.iter()
            .position(|r| r.name == key)
            .map(|i| Self(i as u8 + 1))
            .ok_or(Error::UnknownName {
                what: "benchmark",
                name: s.to_string(),
            })
    }
}

/// `U(x, a, k, m)`: zero inside `[-a, a]`, `k (|x| - a)^m` outside.
pub fn penalty_u(x: f64, a: f64, k: f64, m: i32) -> f64 {
    if x > a {
        k * (x - a).powi(m)
    } else if x < -a {
        k * (-x - a).powi(m)
    } else {
        0.0
    }
}

/// Raw function value. `noise` is only consumed by fn14.
pub fn evaluate_raw(id: BenchmarkId, x: &[f64], noise: &mut dyn RngCore) -> f64 {
    let n = x.len() as f64;
    match id.0 {
        1 => {
            let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
            let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
            -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
        }
        2 => {
            let s = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
            let p: f64 = x
                .iter()
                .enumerate()
                .map(|(k, v)| (v / ((k + 1) as f64).sqrt()).cos())
                .product();
            s - p + 1.0
        }
        3 => 30.0 + x.iter().map(|v| v.floor()).sum::<f64>(),
        4 => x.iter().map(|v| (10.0 * v.ln()).sin()).sum(),
        5 => x
            .iter()
            .map(|&v| {
                let v2 = v * v;
                (v2 * v2 * v - 3.0 * v2 * v2 + 4.0 * v2 * v + 2.0 * v2 - 10.0 * v - 4.0).abs()
            })
            .sum(),
        6 => x.iter().map(|v| v * v).sum(),
        7 => {
            let mut prefix = 0.0;
            x.iter()
                .map(|v| {
                    prefix += v;
                    prefix * prefix
                })
                .sum()
        }
        8 => x.iter().map(|v| (v + 0.5).floor().powi(2)).sum(),
        9 | 15 => x.iter().map(|v| -v * v.abs().sqrt().sin()).sum(),
        10 => x
            .iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
            .sum(),
        11 => {
            let (a, b) = (x[0], x[1]);
            let a2 = a * a;
            let b2 = b * b;
            4.0 * a2 - 2.1 * a2 * a2 + a2 * a2 * a2 / 3.0 + a * b - 4.0 * b2 + 4.0 * b2 * b2
        }
        12 => {
            let (a, b) = (x[0], x[1]);
            let t1 = 1.0
                + (a + b + 1.0).powi(2)
                    * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
            let t2 = 30.0
                + (2.0 * a - 3.0 * b).powi(2)
                    * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
            t1 * t2
        }
        13 => -SHEKEL_A
            .iter()
            .zip(SHEKEL_C)
            .map(|(row, c)| {
                let d: f64 = row.iter().zip(x).map(|(a, v)| (v - a) * (v - a)).sum();
                1.0 / (d + c)
            })
            .sum::<f64>(),
        14 => {
            let s: f64 = x
                .iter()
                .enumerate()
                .map(|(k, v)| (k + 1) as f64 * v.powi(4))
                .sum();
            s + noise.gen::<f64>()
        }
        16 => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        17 => x
            .windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
            .sum(),
        18 => -HARTMANN_ALPHA
            .iter()
            .zip(HARTMANN_A.iter().zip(&HARTMANN_P))
            .map(|(alpha, (a, p))| {
                let inner: f64 = (0..6).map(|j| a[j] * (x[j] - p[j]).powi(2)).sum();
                alpha * (-inner).exp()
            })
            .sum::<f64>(),
        19 => {
            let y: Vec<f64> = x.iter().map(|v| 1.0 + (v + 1.0) / 4.0).collect();
            let last = y[y.len() - 1];
            let mid: f64 = y
                .windows(2)
                .map(|w| (w[0] - 1.0).powi(2) * (1.0 + 10.0 * (PI * w[1]).sin().powi(2)))
                .sum();
            let core = 10.0 * (PI * y[0]).sin().powi(2) + mid + (last - 1.0).powi(2);
            PI / n * core + x.iter().map(|&v| penalty_u(v, 10.0, 100.0, 4)).sum::<f64>()
        }
        20 => {
            let last = x[x.len() - 1];
            let mid: f64 = x
                .windows(2)
                .map(|w| (w[0] - 1.0).powi(2) * (1.0 + (3.0 * PI * w[1]).sin().powi(2)))
                .sum();
            let core = (3.0 * PI * x[0]).sin().powi(2)
                + mid
                + (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
            0.1 * core + x.iter().map(|&v| penalty_u(v, 5.0, 100.0, 4)).sum::<f64>()
        }
        _ => unreachable!("benchmark ids are validated on construction"),
    }
}

/// A benchmark function bound to a dimension and its box.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveProblem {
    id: BenchmarkId,
    name: String,
    bounds: Bounds,
    f_reference: f64,
    reported_minimum: f64,
}

impl ObjectiveProblem {
    pub fn new(id: BenchmarkId, dim: usize) -> Result<Self> {
        if dim < id.min_dim() {
            return Err(Error::Config(format!(
                "{} needs at least {} dimensions, got {dim}",
                id.name(),
                id.min_dim()
            )));
        }
        let (lo, hi) = id.range();
        Ok(Self {
            id,
            name: id.name().to_string(),
            bounds: Bounds::uniform(dim, lo, hi)?,
            f_reference: id.reference(dim),
            reported_minimum: id.reported_minimum(dim),
        })
    }

    pub fn id(&self) -> BenchmarkId {
        self.id
    }

    pub fn f_reference(&self) -> f64 {
        self.f_reference
    }

    pub fn reported_minimum(&self) -> f64 {
        self.reported_minimum
    }
}

impl Problem for ObjectiveProblem {
    fn name(&self) -> &str {
        &self.name
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64], noise: &mut dyn RngCore) -> Result<Evaluation> {
        self.bounds.check_dim(x)?;
        let out_of_bounds = !self.bounds.contains(x);
        let value = evaluate_raw(self.id, x, noise);
        if out_of_bounds {
            // out-of-box inputs may legitimately overflow; report them anyway
            return Ok(Evaluation::unconstrained(value, true));
        }
        Ok(Evaluation::unconstrained(finite_or(&self.name, value)?, false))
    }

    fn reference(&self) -> Option<f64> {
        Some(self.f_reference)
    }
}

/// Evaluates benchmark `id` at `x`, with the box taken from the suite.
pub fn evaluate(id: BenchmarkId, x: &[f64], noise: &mut dyn RngCore) -> Result<Evaluation> {
    ObjectiveProblem::new(id, x.len())?.evaluate(x, noise)
}

/// All twenty problems at [`DEFAULT_DIM`], in table order.
pub fn suite() -> Vec<ObjectiveProblem> {
    suite_with_dim(DEFAULT_DIM)
}

pub fn suite_with_dim(dim: usize) -> Vec<ObjectiveProblem> {
    BenchmarkId::all()
        .map(|id| ObjectiveProblem::new(id, dim).expect("suite dimension covers every function"))
        .collect()
}
