//! Constrained engineering design problems and constraint handling.
//!
//! Constraints follow the `g_i(z) <= 0` convention. The formulations are the
//! standard ones from the design-optimization literature; where common variants
//! of a formulation disagree the canonical form is used:
//!
//! * welded beam: cost coefficient `1.10471` (not `1.1047 L`), `g3 = h - b`,
//!   `g4` coefficient `0.10471`, the radius `R` built from `(h + t) / 2`, and
//!   stress limits 13600 / 30000 psi;
//! * pressure vessel: head volume term `4/3 pi R^3` in `g3` and `g4 = L - 240`;
//!   the thicknesses are snapped to multiples of 0.0625 in before evaluation;
//! * spring: `g1` divides by `d^4`, `g2` uses `D d^3 - d^4`, and
//!   `g3 = 1 - 140.45 d / (D^2 N)`.
//!
//! Pressure vessel cost uses the coefficients `3.1611` and `0.0095`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Bounds, Evaluation, Problem};

/// Thickness increment of the pressure vessel plates (inches).
pub const PLATE_STEP: f64 = 0.0625;

const WB_LOAD: f64 = 6000.0;
const WB_LENGTH: f64 = 14.0;
const WB_YOUNG: f64 = 30e6;
const WB_SHEAR_MODULUS: f64 = 12e6;
const WB_SHEAR_MAX: f64 = 13600.0;
const WB_BENDING_MAX: f64 = 30000.0;
const WB_DEFLECTION_MAX: f64 = 0.25;

/// Welded beam design `z = (h, l, t, b)`: cost and seven constraints.
pub fn welded_beam(z: &[f64; 4]) -> (f64, [f64; 7]) {
    let [h, l, t, b] = *z;
    let cost = 1.10471 * h * h * l + 0.04811 * t * b * (WB_LENGTH + l);

    let shear_primary = WB_LOAD / (2f64.sqrt() * h * l);
    let moment = WB_LOAD * (WB_LENGTH + l / 2.0);
    let half_ht = (h + t) / 2.0;
    let radius = (l * l / 4.0 + half_ht * half_ht).sqrt();
    let polar = 2.0 * (2f64.sqrt() * h * l * (l * l / 12.0 + half_ht * half_ht));
    let shear_torsion = moment * radius / polar;
    let shear = (shear_primary * shear_primary
        + 2.0 * shear_primary * shear_torsion * l / (2.0 * radius)
        + shear_torsion * shear_torsion)
        .sqrt();
    let bending = 6.0 * WB_LOAD * WB_LENGTH / (b * t * t);
    let deflection = 4.0 * WB_LOAD * WB_LENGTH.powi(3) / (WB_YOUNG * t.powi(3) * b);
    let buckling = 4.013 * WB_YOUNG * (t * t * b.powi(6) / 36.0).sqrt() / (WB_LENGTH * WB_LENGTH)
        * (1.0 - t / (2.0 * WB_LENGTH) * (WB_YOUNG / (4.0 * WB_SHEAR_MODULUS)).sqrt());

    let g = [
        shear - WB_SHEAR_MAX,
        bending - WB_BENDING_MAX,
        h - b,
        0.10471 * h * h + 0.04811 * t * b * (WB_LENGTH + l) - 5.0,
        0.125 - h,
        deflection - WB_DEFLECTION_MAX,
        WB_LOAD - buckling,
    ];
    (cost, g)
}

/// Rounds to the nearest multiple of [`PLATE_STEP`].
pub fn snap_to_plate(v: f64) -> f64 {
    (v / PLATE_STEP).round() * PLATE_STEP
}

/// Pressure vessel design `z = (Ts, Th, R, L)`: cost and four constraints.
/// `Ts` and `Th` are snapped to plate multiples first.
pub fn pressure_vessel(z: &[f64; 4]) -> (f64, [f64; 4]) {
    let ts = snap_to_plate(z[0]);
    let th = snap_to_plate(z[1]);
    let (r, len) = (z[2], z[3]);
    let cost = 0.6224 * ts * r * len + 1.7781 * th * r * r + 3.1611 * ts * ts * len
        + 19.84 * ts * ts * r;
    let pi = std::f64::consts::PI;
    let g = [
        -ts + 0.0193 * r,
        -th + 0.0095 * r,
        -pi * r * r * len - 4.0 / 3.0 * pi * r * r * r + 1_296_000.0,
        len - 240.0,
    ];
    (cost, g)
}

/// Tension/compression spring `z = (D, N, d)`: mean coil diameter, active
/// coils, wire diameter. Returns cost and four constraints.
pub fn spring(z: &[f64; 3]) -> (f64, [f64; 4]) {
    let [coil, n, wire] = *z;
    let w2 = wire * wire;
    let w3 = w2 * wire;
    let w4 = w2 * w2;
    let cost = (n + 2.0) * coil * w2;
    let g = [
        1.0 - coil.powi(3) * n / (71785.0 * w4),
        (4.0 * coil * coil - wire * coil) / (12566.0 * (coil * w3 - w4)) + 1.0 / (5108.0 * w2) - 1.0,
        1.0 - 140.45 * wire / (coil * coil * n),
        (wire + coil) / 1.5 - 1.0,
    ];
    (cost, g)
}

/// The three design problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    WeldedBeam,
    PressureVessel,
    Spring,
}

impl DesignKind {
    pub const ALL: [Self; 3] = [Self::WeldedBeam, Self::PressureVessel, Self::Spring];

    pub fn name(self) -> &'static str {
        match self {
            Self::WeldedBeam => "welded_beam",
            Self::PressureVessel => "pressure_vessel",
            Self::Spring => "spring",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Self::Spring => 3,
            _ => 4,
        }
    }

    pub fn n_constraints(self) -> usize {
        match self {
            Self::WeldedBeam => 7,
            _ => 4,
        }
    }

    /// Best cost reported in the source comparison tables.
    pub fn reference_best(self) -> f64 {
        match self {
            Self::WeldedBeam => 1.704,
            Self::PressureVessel => 6123.489,
            Self::Spring => 0.020342,
        }
    }

    /// Best design reported alongside [`Self::reference_best`].
    pub fn reported_design(self) -> &'static [f64] {
        match self {
            Self::WeldedBeam => &[0.197, 8.035, 3.209, 2.210],
            Self::PressureVessel => &[0.726329, 0.527452, 41.66390, 163.4489],
            Self::Spring => &[0.374584, 0.503762, 10.83740],
        }
    }

    fn bounds(self) -> Bounds {
        let (lo, hi): (Vec<f64>, Vec<f64>) = match self {
            Self::WeldedBeam => (vec![0.1, 0.1, 0.1, 0.1], vec![2.0, 10.0, 10.0, 2.0]),
            Self::PressureVessel => (
                vec![PLATE_STEP, PLATE_STEP, 10.0, 10.0],
                vec![99.0 * PLATE_STEP, 99.0 * PLATE_STEP, 200.0, 200.0],
            ),
            Self::Spring => (vec![0.25, 2.0, 0.05], vec![1.3, 15.0, 2.0]),
        };
        Bounds::new(lo, hi).expect("static bounds are ordered")
    }

    /// Cost and constraint vector without validation.
    pub fn raw(self, z: &[f64]) -> (f64, Vec<f64>) {
        match self {
            Self::WeldedBeam => {
                let (c, g) = welded_beam(&[z[0], z[1], z[2], z[3]]);
                (c, g.to_vec())
            }
            Self::PressureVessel => {
                let (c, g) = pressure_vessel(&[z[0], z[1], z[2], z[3]]);
                (c, g.to_vec())
            }
            Self::Spring => {
                let (c, g) = spring(&[z[0], z[1], z[2]]);
                (c, g.to_vec())
            }
        }
    }
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DesignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or(Error::UnknownName {
                what: "design problem",
                name: s.to_string(),
            })
    }
}

/// A design problem with its box.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedProblem {
    kind: DesignKind,
    bounds: Bounds,
}

impl ConstrainedProblem {
    pub fn new(kind: DesignKind) -> Self {
        Self {
            kind,
            bounds: kind.bounds(),
        }
    }

    pub fn kind(&self) -> DesignKind {
        self.kind
    }

    pub fn reference_best(&self) -> f64 {
        self.kind.reference_best()
    }
}

impl Problem for ConstrainedProblem {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64], _noise: &mut dyn RngCore) -> Result<Evaluation> {
        self.bounds.check_dim(x)?;
        let (cost, constraints) = self.kind.raw(x);
        if !cost.is_finite() || constraints.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFiniteResult {
                problem: self.name().to_string(),
            });
        }
        Ok(Evaluation {
            cost,
            constraints,
            out_of_bounds: !self.bounds.contains(x),
        })
    }

    fn reference(&self) -> Option<f64> {
        Some(self.kind.reference_best())
    }

    fn decode(&self, x: &[f64]) -> Vec<f64> {
        let mut z = x.to_vec();
        if self.kind == DesignKind::PressureVessel {
            z[0] = snap_to_plate(z[0]);
            z[1] = snap_to_plate(z[1]);
        }
        z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltyMode {
    /// `cost + weight * sum(max(0, g)^2)`
    StaticPenalty,
    /// Feasible beats infeasible; infeasible compare by total violation.
    #[default]
    FeasibilityRules,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PenaltyParams {
    pub mode: PenaltyMode,
    pub weight: f64,
}

impl Default for PenaltyParams {
    fn default() -> Self {
        Self {
            mode: PenaltyMode::FeasibilityRules,
            weight: 1e6,
        }
    }
}

impl PenaltyParams {
    pub fn validate(&self) -> Result<()> {
        if self.mode == PenaltyMode::StaticPenalty && !(self.weight > 0.0) {
            return Err(Error::Config(format!(
                "static penalty weight must be positive, got {}",
                self.weight
            )));
        }
        Ok(())
    }
}

/// Comparable fitness key; smaller is better.
///
/// Ordered by `violation` first, then `value`. In static-penalty mode
/// `violation` is always 0 and `value` carries the penalized cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub value: f64,
    pub violation: f64,
}

impl Fitness {
    pub fn scalar(value: f64) -> Self {
        Self {
            value,
            violation: 0.0,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }

    pub fn compare(&self, other: &Self) -> Ordering {
        self.violation
            .total_cmp(&other.violation)
            .then(self.value.total_cmp(&other.value))
    }

    /// Strictly better.
    pub fn better_than(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Less
    }
}

/// Combines a cost and constraint vector into a fitness key.
pub fn penalized_fitness(cost: f64, g: &[f64], penalty: &PenaltyParams) -> Fitness {
    match penalty.mode {
        PenaltyMode::StaticPenalty => {
            let excess: f64 = g.iter().map(|v| v.max(0.0).powi(2)).fold(0.0, |s, v| s + v);
            Fitness::scalar(cost + penalty.weight * excess)
        }
        PenaltyMode::FeasibilityRules => Fitness {
            value: cost,
            violation: g.iter().map(|v| v.max(0.0)).fold(0.0, |s, v| s + v),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn welded_beam_cost() {
        let (c, g) = welded_beam(&[1.0, 1.0, 1.0, 1.0]);
        assert!((c - 1.82636).abs() < 1e-12);
        assert_eq!(g.len(), 7);
    }

    #[test]
    fn pressure_vessel_values() {
        let (c, _) = pressure_vessel(&[1.0, 1.0, 1.0, 1.0]);
        assert!((c - 25.4016).abs() < 1e-12);
        let (_, g) = pressure_vessel(&[1.0, 1.0, 10.0, 100.0]);
        assert!((g[0] + 0.807).abs() < 1e-12);
        assert_eq!(g[3], -140.0);
    }

    #[test]
    fn spring_values() {
        let (c, g) = spring(&[1.0, 1.0, 1.0]);
        assert_eq!(c, 3.0);
        assert!(!g[1].is_finite());
        let (_, g) = spring(&[1.0, 5.0, 0.5]);
        assert_eq!(g[3], 0.0);
    }

    #[test]
    fn singular_design_is_rejected() {
        let p = ConstrainedProblem::new(DesignKind::Spring);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            p.evaluate(&[1.0, 5.0, 1.0], &mut rng),
            Err(Error::NonFiniteResult { .. })
        ));
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_to_plate(0.8), 0.8125);
        assert_eq!(snap_to_plate(0.03), 0.0);
        assert_eq!(snap_to_plate(snap_to_plate(1.2345)), snap_to_plate(1.2345));
        let p = ConstrainedProblem::new(DesignKind::PressureVessel);
        assert_eq!(p.decode(&[0.8, 0.41, 40.0, 150.0]), vec![0.8125, 0.4375, 40.0, 150.0]);
    }

    #[test]
    fn penalty_modes() {
        let stat = PenaltyParams {
            mode: PenaltyMode::StaticPenalty,
            weight: 10.0,
        };
        assert_eq!(penalized_fitness(3.0, &[-1.0, -2.0], &stat).value, 3.0);
        assert_eq!(penalized_fitness(1.0, &[1.0, 0.0], &stat).value, 11.0);

        let rules = PenaltyParams::default();
        let feasible = penalized_fitness(5.0, &[-1.0], &rules);
        let infeasible = penalized_fitness(1.0, &[0.5], &rules);
        let worse = penalized_fitness(0.1, &[2.0], &rules);
        assert!(feasible.better_than(&infeasible));
        assert!(infeasible.better_than(&worse));
        assert!(!feasible.better_than(&feasible));

        let bad = PenaltyParams {
            mode: PenaltyMode::StaticPenalty,
            weight: 0.0,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn names_parse() {
        for k in DesignKind::ALL {
            assert_eq!(k.name().parse::<DesignKind>().unwrap(), k);
            assert_eq!(ConstrainedProblem::new(k).dim(), k.dim());
        }
        assert_eq!("pressure-vessel".parse::<DesignKind>().unwrap(), DesignKind::PressureVessel);
    }
}
