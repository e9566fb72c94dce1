//! Deterministic chaotic sequence generators.
//!
//! Twelve one-dimensional maps are provided. Each map carries a fixed
//! attractor interval that [`ChaoticMapState::next_unit`] uses to rescale raw
//! iterates onto `[0, 1]` (clamping at the endpoints), which is the form every
//! chaos-driven optimizer parameter consumes.
//!
//! A few maps deviate from their textbook one-line forms:
//!
//! * `Tent` is the canonical tent `z' = mu * min(z, 1 - z)`. The default slope
//!   is `1.9999` rather than `2`: with slope exactly 2 every step is an exact
//!   binary shift and a double-precision orbit reaches the fixed point 0 within
//!   about 55 steps.
//! * `Sinus` is `2.3 z^2 sin(pi z)`; `Chebyshev` is `cos(k arccos z)` with
//!   `k = 4` on `[-1, 1]`.
//! * `Henon` is the two-term recurrence `z' = 1 - P z^2 + Q z_prev`, with
//!   `z_prev` tracked in the state and starting at 0.
//!
//! Floating-point orbits can land exactly on an absorbing point (logistic
//! `0.5 -> 1 -> 0`, a Gauss reciprocal that is an exact integer, ...). When an
//! iterate equals one of the kind's documented fixed points, the state is
//! re-seeded to a deterministic point of the kind's safe seed interval derived
//! from the step counter, so sequences stay reproducible and never freeze.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seed used when none is given.
pub const DEFAULT_SEED: f64 = 0.7;

const GOLDEN_FRACTION: f64 = 0.618_033_988_749_894_9;
const FIXED_POINT_TOL: f64 = 1e-12;

/// One of the twelve chaotic maps together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChaoticMapKind {
    /// `z' = A z (1 - z)`
    Logistic { a: f64 },
    /// `z' = mu z` for `z < 0.5`, `mu (1 - z)` otherwise.
    Tent { slope: f64 },
    /// `z' = A z^2 sin(pi z)`
    Sinusoidal { a: f64 },
    /// `z' = 1/z mod 1`, with 0 mapped to 0.
    Gauss,
    /// `z' = (z + B - (A / 2pi) sin(2 pi z)) mod 1`
    Circle { a: f64, b: f64 },
    /// `z' = 2.3 z^2 sin(pi z)`
    Sinus,
    /// `z' = sin(A pi / z)`
    Iterative { a: f64 },
    /// `z' = cos(k arccos z)`
    Chebyshev { order: f64 },
    /// `z' = 1 - P z^2 + Q z_prev`
    Henon { p: f64, q: f64 },
    /// `z' = delta + z + B z^N` on `(0, P]`, `(z - P) / (1 - P)` on `(P, 1]`.
    Intermittency { delta: f64, b: f64, n: i32, p: f64 },
    /// `z' = alpha (7.8 z - 23.3 z^2 + 28.7 z^3 - 13.3 z^4)`
    Singer { alpha: f64 },
    /// `z' = (A / 4) sin(pi z)`
    Sine { a: f64 },
}

impl ChaoticMapKind {
    pub const NAMES: [&'static str; 12] = [
        "logistic",
        "tent",
        "sinusoidal",
        "gauss",
        "circle",
        "sinus",
        "iterative",
        "chebyshev",
        "henon",
        "intermittency",
        "singer",
        "sine",
    ];

    pub const LOGISTIC: Self = Self::Logistic { a: 4.0 };
    pub const TENT: Self = Self::Tent { slope: 1.9999 };
    pub const SINUSOIDAL: Self = Self::Sinusoidal { a: 2.3 };
    pub const GAUSS: Self = Self::Gauss;
    pub const CIRCLE: Self = Self::Circle { a: 0.5, b: 0.2 };
    pub const SINUS: Self = Self::Sinus;
    pub const ITERATIVE: Self = Self::Iterative { a: 0.7 };
    pub const CHEBYSHEV: Self = Self::Chebyshev { order: 4.0 };
    pub const HENON: Self = Self::Henon { p: 1.4, q: 0.3 };
    pub const INTERMITTENCY: Self = Self::Intermittency {
        delta: 0.001,
        b: 1.0,
        n: 2,
        p: 0.5,
    };
    pub const SINGER: Self = Self::Singer { alpha: 1.07 };
    pub const SINE: Self = Self::Sine { a: 4.0 };

    /// All twelve kinds with default parameters, in table order.
    pub const ALL: [Self; 12] = [
        Self::LOGISTIC,
        Self::TENT,
        Self::SINUSOIDAL,
        Self::GAUSS,
        Self::CIRCLE,
        Self::SINUS,
        Self::ITERATIVE,
        Self::CHEBYSHEV,
        Self::HENON,
        Self::INTERMITTENCY,
        Self::SINGER,
        Self::SINE,
    ];

    pub fn name(&self) -> &'static str {
        Self::NAMES[self.index()]
    }

    /// Position of the kind in [`ChaoticMapKind::ALL`].
    pub fn index(&self) -> usize {
        match self {
            Self::Logistic { .. } => 0,
            Self::Tent { .. } => 1,
            Self::Sinusoidal { .. } => 2,
            Self::Gauss => 3,
            Self::Circle { .. } => 4,
            Self::Sinus => 5,
            Self::Iterative { .. } => 6,
            Self::Chebyshev { .. } => 7,
            Self::Henon { .. } => 8,
            Self::Intermittency { .. } => 9,
            Self::Singer { .. } => 10,
            Self::Sine { .. } => 11,
        }
    }

    /// Interval of raw iterates that [`ChaoticMapState::next_unit`] maps onto `[0, 1]`.
    pub fn attractor(&self) -> (f64, f64) {
        match *self {
            Self::Iterative { .. } | Self::Chebyshev { .. } => (-1.0, 1.0),
            Self::Henon { .. } => (-1.5, 1.5),
            Self::Sine { a } => (0.0, a / 4.0),
            _ => (0.0, 1.0),
        }
    }

    /// Interval a user-supplied seed must lie in.
    pub fn seed_interval(&self) -> (f64, f64) {
        match self {
            Self::Iterative { .. } | Self::Chebyshev { .. } => (-1.0, 1.0),
            Self::Henon { .. } => (-1.5, 1.5),
            _ => (0.0, 1.0),
        }
    }

    /// Sub-interval from which derived seeds are drawn. Every seed in it
    /// yields a non-degenerate orbit with default parameters.
    pub fn safe_seed_interval(&self) -> (f64, f64) {
        match self {
            // 0 is superattracting; the chaotic band is roughly [0.487, 0.919].
            Self::Sinusoidal { .. } | Self::Sinus => (0.5, 0.9),
            Self::Chebyshev { .. } => (-0.95, 0.95),
            Self::Henon { .. } => (-0.5, 0.5),
            _ => (0.05, 0.95),
        }
    }

    /// True when `z` is a fixed or singular point of the map.
    pub fn is_fixed_point(&self, z: f64) -> bool {
        let near = |p: f64| (z - p).abs() <= FIXED_POINT_TOL;
        match *self {
            Self::Logistic { a } => near(0.0) || near(1.0) || near(1.0 - 1.0 / a),
            Self::Tent { slope } => near(0.0) || near(slope / (1.0 + slope)),
            Self::Sinusoidal { .. } | Self::Sinus | Self::Gauss | Self::Singer { .. } => {
                near(0.0)
            }
            Self::Sine { .. } => near(0.0),
            Self::Iterative { .. } => near(0.0),
            Self::Chebyshev { order } if order == 4.0 => {
                near(1.0)
                    || near(-0.5)
                    || near((2.0 * PI / 5.0).cos())
                    || near((4.0 * PI / 5.0).cos())
            }
            Self::Chebyshev { .. } => near(1.0),
            Self::Circle { .. } | Self::Henon { .. } | Self::Intermittency { .. } => false,
        }
    }

    /// Exact absorbing values an orbit can fall into in floating point.
    fn is_absorbing(&self, z: f64) -> bool {
        match *self {
            Self::Logistic { a } => z == 0.0 || z == 1.0 - 1.0 / a,
            Self::Tent { .. }
            | Self::Gauss
            | Self::Sinusoidal { .. }
            | Self::Sinus
            | Self::Singer { .. }
            | Self::Sine { .. } => z == 0.0,
            Self::Chebyshev { .. } => z == 1.0,
            _ => false,
        }
    }

    /// One application of the map.
    pub fn apply(&self, z: f64, z_prev: f64) -> f64 {
        match *self {
            Self::Logistic { a } => a * z * (1.0 - z),
            Self::Tent { slope } => {
                if z < 0.5 {
                    slope * z
                } else {
                    slope * (1.0 - z)
                }
            }
            Self::Sinusoidal { a } => a * z * z * (PI * z).sin(),
            Self::Gauss => {
                if z == 0.0 {
                    0.0
                } else {
                    let r = 1.0 / z;
                    r - r.floor()
                }
            }
            Self::Circle { a, b } => {
                let v = z + b - (a / (2.0 * PI)) * (2.0 * PI * z).sin();
                v.rem_euclid(1.0)
            }
            Self::Sinus => 2.3 * z * z * (PI * z).sin(),
            Self::Iterative { a } => (a * PI / z).sin(),
            Self::Chebyshev { order } => (order * z.clamp(-1.0, 1.0).acos()).cos(),
            Self::Henon { p, q } => 1.0 - p * z * z + q * z_prev,
            Self::Intermittency { delta, b, n, p } => {
                if z <= p {
                    delta + z + b * z.powi(n)
                } else {
                    (z - p) / (1.0 - p)
                }
            }
            Self::Singer { alpha } => {
                let z2 = z * z;
                alpha * (7.8 * z - 23.3 * z2 + 28.7 * z2 * z - 13.3 * z2 * z2)
            }
            Self::Sine { a } => a / 4.0 * (PI * z).sin(),
        }
    }

    /// Returns a copy with the named parameter replaced.
    pub fn with_param(self, param: &str, value: f64) -> Result<Self> {
        let bad = || Error::Config(format!("map `{}` has no parameter `{param}`", self.name()));
        let kind = match (self, param) {
            (Self::Logistic { .. }, "a") => Self::Logistic { a: value },
            (Self::Tent { .. }, "slope") => Self::Tent { slope: value },
            (Self::Sinusoidal { .. }, "a") => Self::Sinusoidal { a: value },
            (Self::Circle { b, .. }, "a") => Self::Circle { a: value, b },
            (Self::Circle { a, .. }, "b") => Self::Circle { a, b: value },
            (Self::Iterative { .. }, "a") => Self::Iterative { a: value },
            (Self::Chebyshev { .. }, "order") => Self::Chebyshev { order: value },
            (Self::Henon { q, .. }, "p") => Self::Henon { p: value, q },
            (Self::Henon { p, .. }, "q") => Self::Henon { p, q: value },
            (Self::Intermittency { b, n, p, .. }, "delta") => Self::Intermittency {
                delta: value,
                b,
                n,
                p,
            },
            (Self::Intermittency { delta, n, p, .. }, "b") => Self::Intermittency {
                delta,
                b: value,
                n,
                p,
            },
            (Self::Intermittency { delta, b, p, .. }, "n") => Self::Intermittency {
                delta,
                b,
                n: value as i32,
                p,
            },
            (Self::Intermittency { delta, b, n, .. }, "p") => Self::Intermittency {
                delta,
                b,
                n,
                p: value,
            },
            (Self::Singer { .. }, "alpha") => Self::Singer { alpha: value },
            (Self::Sine { .. }, "a") => Self::Sine { a: value },
            _ => return Err(bad()),
        };
        Ok(kind)
    }
}

impl fmt::Display for ChaoticMapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChaoticMapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Self::NAMES
            .iter()
            .position(|n| *n == key)
            .map(|i| Self::ALL[i])
            .ok_or(Error::UnknownName {
                what: "chaotic map",
                name: s.to_string(),
            })
    }
}

/// A running chaotic generator.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaoticMapState {
    kind: ChaoticMapKind,
    z: f64,
    z_prev: f64,
    step_count: u64,
}

impl ChaoticMapState {
    /// Creates a generator at seed `z0`.
    pub fn new(kind: ChaoticMapKind, z0: f64) -> Result<Self> {
        let (lo, hi) = kind.seed_interval();
        let below = match kind {
            ChaoticMapKind::Intermittency { .. } => z0 <= lo,
            _ => z0 < lo,
        };
        if !z0.is_finite() || below || z0 > hi {
            return Err(Error::SeedOutOfRange {
                kind: kind.name(),
                seed: z0,
                lo,
                hi,
            });
        }
        if kind.is_fixed_point(z0) {
            return Err(Error::FixedPointSeed {
                kind: kind.name(),
                seed: z0,
            });
        }
        Ok(Self {
            kind,
            z: z0,
            z_prev: 0.0,
            step_count: 0,
        })
    }

    /// Generator at [`DEFAULT_SEED`].
    pub fn with_default_seed(kind: ChaoticMapKind) -> Self {
        Self::new(kind, DEFAULT_SEED).expect("default seed is admissible for every kind")
    }

    /// Generator seeded at `u` in `[0, 1]` mapped affinely into the kind's safe seed interval.
    pub fn from_unit_seed(kind: ChaoticMapKind, u: f64) -> Result<Self> {
        let (lo, hi) = kind.safe_seed_interval();
        let z0 = lo + (hi - lo) * u.clamp(0.0, 1.0);
        Self::new(kind, z0)
    }

    pub fn kind(&self) -> ChaoticMapKind {
        self.kind
    }

    /// Current raw iterate.
    pub fn value(&self) -> f64 {
        self.z
    }

    /// Previous raw iterate (used by the Henon map only).
    pub fn previous(&self) -> f64 {
        self.z_prev
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// Advances one step and returns the new raw iterate.
    pub fn next_raw(&mut self) -> Result<f64> {
        let mut next = self.kind.apply(self.z, self.z_prev);
        self.step_count += 1;
        if !next.is_finite() {
            return Err(Error::DivergedOrbit {
                kind: self.kind.name(),
                steps: self.step_count,
            });
        }
        if self.kind.is_absorbing(next) {
            next = self.reseed_point();
        }
        self.z_prev = self.z;
        self.z = next;
        Ok(next)
    }

    /// Advances one step and returns the iterate rescaled onto `[0, 1]`.
    pub fn next_unit(&mut self) -> Result<f64> {
        let raw = self.next_raw()?;
        let (lo, hi) = self.kind.attractor();
        Ok(((raw - lo) / (hi - lo)).clamp(0.0, 1.0))
    }

    fn reseed_point(&self) -> f64 {
        let (lo, hi) = self.kind.safe_seed_interval();
        let frac = (DEFAULT_SEED + self.step_count as f64 * GOLDEN_FRACTION).fract();
        lo + (hi - lo) * frac
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_echoes_seed() {
        let s = ChaoticMapState::new(ChaoticMapKind::LOGISTIC, 0.7).unwrap();
        assert_eq!(s.value(), 0.7);
        assert_eq!(s.step_count(), 0);
    }

    #[test]
    fn rejects_fixed_point_seeds() {
        for (kind, z0) in [
            (ChaoticMapKind::LOGISTIC, 0.0),
            (ChaoticMapKind::GAUSS, 0.0),
            (ChaoticMapKind::LOGISTIC, 0.75),
            (ChaoticMapKind::CHEBYSHEV, 1.0),
            (ChaoticMapKind::ITERATIVE, 0.0),
        ] {
            let err = ChaoticMapState::new(kind, z0).unwrap_err();
            assert!(matches!(err, Error::FixedPointSeed { .. }), "{kind}: {err}");
            assert!(err.to_string().contains(kind.name()));
        }
    }

    #[test]
    fn rejects_out_of_interval_seeds() {
        assert!(matches!(
            ChaoticMapState::new(ChaoticMapKind::LOGISTIC, 1.5),
            Err(Error::SeedOutOfRange { .. })
        ));
        assert!(matches!(
            ChaoticMapState::new(ChaoticMapKind::INTERMITTENCY, 0.0),
            Err(Error::SeedOutOfRange { .. })
        ));
        assert!(ChaoticMapState::new(ChaoticMapKind::SINE, f64::NAN).is_err());
    }

    #[test]
    fn single_steps() {
        let mut s = ChaoticMapState::new(ChaoticMapKind::LOGISTIC, 0.2).unwrap();
        assert!((s.next_raw().unwrap() - 0.64).abs() < 1e-15);
        assert_eq!(s.step_count(), 1);

        // 0.25 lands on the fixed point 0.75 and is moved off it
        let mut s = ChaoticMapState::new(ChaoticMapKind::LOGISTIC, 0.25).unwrap();
        assert_ne!(s.next_raw().unwrap(), 0.75);

        let mut s = ChaoticMapState::new(ChaoticMapKind::SINE, 0.5).unwrap();
        assert_eq!(s.next_raw().unwrap(), 1.0);

        let mut s = ChaoticMapState::new(ChaoticMapKind::GAUSS, 0.4).unwrap();
        assert!((s.next_raw().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unit_rescaling() {
        let mut s = ChaoticMapState::new(ChaoticMapKind::LOGISTIC, 0.2).unwrap();
        assert!((s.next_unit().unwrap() - 0.64).abs() < 1e-15);

        // cos(4 arccos(-cos(pi/4))) = cos(3 pi) = -1
        let mut s =
            ChaoticMapState::new(ChaoticMapKind::CHEBYSHEV, -(PI / 4.0).cos()).unwrap();
        let u = s.next_unit().unwrap();
        assert!(u.abs() < 1e-12, "{u}");

        let mut s = ChaoticMapState::new(ChaoticMapKind::CIRCLE, 0.3).unwrap();
        let u = s.next_unit().unwrap();
        assert!((0.0..=1.0).contains(&u));
    }

    #[test]
    fn henon_tracks_previous_iterate() {
        let mut s = ChaoticMapState::new(ChaoticMapKind::HENON, 0.7).unwrap();
        let z1 = s.next_raw().unwrap();
        assert!((z1 - (1.0 - 1.4 * 0.49)).abs() < 1e-15);
        let z2 = s.next_raw().unwrap();
        assert_eq!(z2, 1.0 - 1.4 * z1 * z1 + 0.3 * 0.7);
        assert_eq!(s.previous(), z1);
    }

    #[test]
    fn absorbing_state_is_escaped() {
        // 0.5 -> 1 -> 0 under the logistic map
        let mut s = ChaoticMapState::new(ChaoticMapKind::LOGISTIC, 0.5).unwrap();
        assert_eq!(s.next_raw().unwrap(), 1.0);
        let z = s.next_raw().unwrap();
        assert!(z > 0.0 && z < 1.0);
        assert!(s.next_raw().unwrap() > 0.0);
    }

    #[test]
    fn names_round_trip() {
        for kind in ChaoticMapKind::ALL {
            assert_eq!(kind.name().parse::<ChaoticMapKind>().unwrap(), kind);
        }
        assert!("lorenz".parse::<ChaoticMapKind>().is_err());
    }

    #[test]
    fn parameter_override() {
        let k = ChaoticMapKind::CIRCLE.with_param("b", 0.3).unwrap();
        assert_eq!(k, ChaoticMapKind::Circle { a: 0.5, b: 0.3 });
        assert!(ChaoticMapKind::GAUSS.with_param("a", 1.0).is_err());
    }
}
