//! Element sets, anomaly conversions and the RIC relative-motion frame.
//!
//! Everything in here is a pure function of its inputs. Angles are radians;
//! degrees only appear at the I/O boundary in [`crate::io`].

mod anomaly;
mod elements;
mod frames;

pub use anomaly::{anomaly_convert, solve_kepler, AnomalyKind};
pub use elements::{cartesian_to_coe, coe_to_cartesian, CartesianState, ClassicalOrbitalElements, ElementQuality};
pub use frames::{relative_state_ric, ric_basis, RelativeState, RicBasis};

use std::f64::consts::{PI, TAU};

use thiserror::Error;

/// Earth gravitational parameter, km³/s².
pub const MU_EARTH: f64 = 398_600.4418;
/// Earth equatorial radius, km.
pub const R_EARTH: f64 = 6378.137;
/// Second zonal harmonic.
pub const J2_EARTH: f64 = 1.082_626_68e-3;

/// Below this eccentricity the argument of periapsis is undefined and folded
/// into the true anomaly.
pub const ECC_SINGULAR: f64 = 1e-6;
/// Below this inclination (or within it of π) the node is undefined.
pub const INC_SINGULAR: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitalError {
    #[error("eccentricity {0} is not elliptical (must satisfy 0 <= e < 1)")]
    NotElliptical(f64),
    #[error("semi-major axis {0} km must be positive")]
    NonPositiveSemiMajorAxis(f64),
    #[error("inclination {0} rad outside [0, pi]")]
    InclinationOutOfRange(f64),
    #[error("state is not bound (specific energy {0} km^2/s^2 >= 0)")]
    Unbound(f64),
    #[error("degenerate state: {0}")]
    Degenerate(&'static str),
    #[error("epoch mismatch: chaser at {chaser} s, target at {target} s")]
    EpochMismatch { chaser: f64, target: f64 },
    #[error("invalid gravity context: {0}")]
    InvalidContext(&'static str),
}

/// Central-body constants used by every dynamical computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravContext {
    pub mu: f64,
    pub re: f64,
    pub j2: f64,
}

impl Default for GravContext {
    fn default() -> Self {
        Self {
            mu: MU_EARTH,
            re: R_EARTH,
            j2: J2_EARTH,
        }
    }
}

impl GravContext {
    pub fn new(mu: f64, re: f64, j2: f64) -> Result<Self, OrbitalError> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(OrbitalError::InvalidContext("mu must be positive"));
        }
        if !(re > 0.0 && re.is_finite()) {
            return Err(OrbitalError::InvalidContext("re must be positive"));
        }
        if !(j2 > 0.0 && j2.is_finite()) {
            return Err(OrbitalError::InvalidContext("j2 must be positive"));
        }
        Ok(Self { mu, re, j2 })
    }

    /// Keplerian period of an orbit with semi-major axis `a` km.
    pub fn period(&self, a: f64) -> f64 {
        TAU * (a.powi(3) / self.mu).sqrt()
    }

    /// Mean motion in rad/s.
    pub fn mean_motion(&self, a: f64) -> f64 {
        (self.mu / a.powi(3)).sqrt()
    }

    /// Circular speed at radius `r` km.
    pub fn circular_speed(&self, r: f64) -> f64 {
        (self.mu / r).sqrt()
    }
}

/// Wraps an angle into [0, 2π).
pub fn wrap_two_pi(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Wraps an angle into (−π, π].
pub fn wrap_pi(angle: f64) -> f64 {
    let w = wrap_two_pi(angle);
    if w > PI {
        w - TAU
    } else {
        w
    }
}
