//! Numerical propagation under two-body gravity, optional J2 and an optional
//! RIC thrust-acceleration profile.
//!
//! Two state representations are supported: inertial Cartesian
//! ([`propagate_cartesian`]) and osculating classical elements driven by the
//! Gauss variational equations ([`propagate_gve`]). Both share the same
//! integrators and the same force model, which makes them independent checks
//! on each other.

mod dynamics;
mod events;
mod gve;
mod integrator;

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;
use thiserror::Error;

use crate::orbital::{CartesianState, ClassicalOrbitalElements, GravContext, OrbitalError};

pub use dynamics::{j2_acceleration, two_body_acceleration};
pub use events::{propagate_until, EventKind, EventSpec};
pub use gve::{gve_rates, gve_sensitivity, propagate_gve, propagate_gve_dense};

use integrator::{integrate, State6};

/// Altitude below which propagation halts with [`PropagationError::ReEntry`].
pub const REENTRY_ALTITUDE_KM: f64 = 100.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("adaptive step size underflow at t = {epoch} s")]
    StepSizeUnderflow { epoch: f64 },
    #[error("re-entry: altitude {altitude:.3} km at t = {epoch} s")]
    ReEntry { epoch: f64, altitude: f64 },
    #[error("no event reached within the {horizon} s horizon")]
    HorizonExceeded { horizon: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("thrust acceleration {magnitude} km/s^2 is non-finite or exceeds the {limit} km/s^2 bound")]
    ThrustOutOfBounds { magnitude: f64, limit: f64 },
    #[error(transparent)]
    Orbital(#[from] OrbitalError),
}

type ThrustFn = dyn Fn(&CartesianState) -> Vector3<f64> + Send + Sync;

/// RIC thrust acceleration (km/s²) as a function of the osculating state.
#[derive(Clone)]
pub struct ThrustProfile {
    accel: Arc<ThrustFn>,
    pub max_accel: f64,
}

impl fmt::Debug for ThrustProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThrustProfile").field("max_accel", &self.max_accel).finish_non_exhaustive()
    }
}

impl ThrustProfile {
    pub fn new<F>(max_accel: f64, accel: F) -> Self
    where
        F: Fn(&CartesianState) -> Vector3<f64> + Send + Sync + 'static,
    {
        Self {
            accel: Arc::new(accel),
            max_accel,
        }
    }

    /// Fixed acceleration vector in the instantaneous RIC frame.
    pub fn constant_ric(accel: Vector3<f64>) -> Self {
        let max = accel.norm();
        Self::new(max, move |_| accel)
    }

    pub fn evaluate(&self, state: &CartesianState) -> Result<Vector3<f64>, PropagationError> {
        let a = (self.accel)(state);
        let mag = a.norm();
        if !mag.is_finite() || mag > self.max_accel * (1.0 + 1e-12) {
            return Err(PropagationError::ThrustOutOfBounds {
                magnitude: mag,
                limit: self.max_accel,
            });
        }
        Ok(a)
    }
}

/// Force model: gravity constants, the J2 switch and an optional thrust law.
#[derive(Debug, Clone, Default)]
pub struct PerturbationConfig {
    pub ctx: GravContext,
    pub include_j2: bool,
    pub thrust: Option<ThrustProfile>,
}

impl PerturbationConfig {
    pub fn two_body() -> Self {
        Self::default()
    }

    pub fn with_j2(mut self, on: bool) -> Self {
        self.include_j2 = on;
        self
    }

    pub fn with_thrust(mut self, thrust: ThrustProfile) -> Self {
        self.thrust = Some(thrust);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegratorConfig {
    Rk4Fixed {
        step: f64,
    },
    Rkf45 {
        rel_tol: f64,
        abs_tol: f64,
        min_step: f64,
        max_step: f64,
    },
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig::Rkf45 {
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            min_step: 1e-6,
            max_step: 120.0,
        }
    }
}

impl IntegratorConfig {
    /// Fixed 10 s RK4, kept for reproducibility runs.
    pub fn rk4_reference() -> Self {
        IntegratorConfig::Rk4Fixed { step: 10.0 }
    }

    pub fn validate(&self) -> Result<(), PropagationError> {
        match *self {
            IntegratorConfig::Rk4Fixed { step } if !(step > 0.0 && step.is_finite()) => {
                Err(PropagationError::InvalidConfig(format!("rk4 step must be positive, got {step}")))
            }
            IntegratorConfig::Rkf45 {
                rel_tol,
                abs_tol,
                min_step,
                max_step,
            } if !(rel_tol > 0.0 && abs_tol > 0.0 && min_step > 0.0 && max_step >= min_step) => {
                Err(PropagationError::InvalidConfig(
                    "rkf45 tolerances and step bounds must be positive with max_step >= min_step".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

fn pack(s: &CartesianState) -> State6 {
    State6::new(s.r.x, s.r.y, s.r.z, s.v.x, s.v.y, s.v.z)
}

fn unpack(y: &State6, t: f64) -> CartesianState {
    CartesianState::new(Vector3::new(y[0], y[1], y[2]), Vector3::new(y[3], y[4], y[5]), t)
}

fn reentry_guard(ctx: GravContext) -> impl Fn(f64, &State6) -> Result<(), PropagationError> {
    move |t, y| {
        let alt = Vector3::new(y[0], y[1], y[2]).norm() - ctx.re;
        if alt < REENTRY_ALTITUDE_KM {
            Err(PropagationError::ReEntry { epoch: t, altitude: alt })
        } else {
            Ok(())
        }
    }
}

fn check_duration(duration: f64) -> Result<(), PropagationError> {
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(PropagationError::InvalidConfig(format!(
            "duration must be finite and non-negative, got {duration}"
        )));
    }
    Ok(())
}

/// Propagates an inertial state forward by `duration` seconds.
pub fn propagate_cartesian(
    state: &CartesianState,
    duration: f64,
    pert: &PerturbationConfig,
    integ: &IntegratorConfig,
) -> Result<CartesianState, PropagationError> {
    cartesian_impl(state, duration, pert, integ, &mut |_, _| {})
}

/// Like [`propagate_cartesian`] but also returns every accepted step,
/// starting with the initial state.
pub fn propagate_cartesian_dense(
    state: &CartesianState,
    duration: f64,
    pert: &PerturbationConfig,
    integ: &IntegratorConfig,
) -> Result<Vec<CartesianState>, PropagationError> {
    let mut out = vec![*state];
    cartesian_impl(state, duration, pert, integ, &mut |t, y| out.push(unpack(y, t)))?;
    Ok(out)
}

fn cartesian_impl(
    state: &CartesianState,
    duration: f64,
    pert: &PerturbationConfig,
    integ: &IntegratorConfig,
    on_step: &mut dyn FnMut(f64, &State6),
) -> Result<CartesianState, PropagationError> {
    check_duration(duration)?;
    integ.validate()?;
    if duration == 0.0 {
        return Ok(*state);
    }
    let mut rhs = |t: f64, y: &State6| dynamics::cartesian_rhs(t, y, pert);
    let guard = reentry_guard(pert.ctx);
    let out = integrate(
        &mut rhs,
        state.epoch,
        pack(state),
        state.epoch + duration,
        integ,
        &[],
        &guard,
        on_step,
    )?;
    Ok(unpack(&out.y, out.t))
}

/// The propagated state together with its osculating elements.
pub fn propagate_to_elements(
    state: &CartesianState,
    duration: f64,
    pert: &PerturbationConfig,
    integ: &IntegratorConfig,
) -> Result<(CartesianState, ClassicalOrbitalElements), PropagationError> {
    let s = propagate_cartesian(state, duration, pert, integ)?;
    let (coe, _) = crate::orbital::cartesian_to_coe(&s, &pert.ctx)?;
    Ok((s, coe))
}
