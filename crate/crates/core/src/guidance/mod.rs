//! Low-thrust feedback guidance: the Directional Adaptive Guidance law
//! ([`dag`]) and the proximity-quotient Q-law ([`qlaw`]).
//!
//! Both laws take the osculating elements and a [`TargetSpec`] and return a
//! [`ThrustCommand`] in the RIC frame.

pub mod dag;
pub mod qlaw;
mod transfer;

use std::fmt;

use nalgebra::Vector3;
use thiserror::Error;

use crate::orbital::{wrap_pi, ClassicalOrbitalElements, OrbitalError};
use crate::propagation::PropagationError;

pub use dag::{
    adaptive_ratio, angles_for_element, angles_to_unit_vector, blend, dag_command, efficiency, Blend, DagSession,
};
pub use qlaw::{best_direction, max_rate, penalty_p, q_value, qdot, scaling_s, QlawParams};
pub use transfer::{fly_transfer, SteeringLaw, TransferOptions, TransferResult};

/// Steerable slow elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    A,
    E,
    I,
    Raan,
    Argp,
}

impl Element {
    pub const ALL: [Element; 5] = [Element::A, Element::E, Element::I, Element::Raan, Element::Argp];

    /// Row of this element in the GVE sensitivity matrix.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn value(self, coe: &ClassicalOrbitalElements) -> f64 {
        match self {
            Element::A => coe.a,
            Element::E => coe.e,
            Element::I => coe.i,
            Element::Raan => coe.raan,
            Element::Argp => coe.argp,
        }
    }

    pub fn is_angle(self) -> bool {
        matches!(self, Element::I | Element::Raan | Element::Argp)
    }

    /// `to − from`, wrapped to (−π, π] for the node and periapsis angles.
    pub fn difference(self, to: f64, from: f64) -> f64 {
        match self {
            Element::Raan | Element::Argp => wrap_pi(to - from),
            _ => to - from,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Element::A => "a",
            Element::E => "e",
            Element::I => "i",
            Element::Raan => "raan",
            Element::Argp => "argp",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GuidanceError {
    #[error("no element is targeted")]
    NoTargets,
    #[error("element {0}: target equals initial value")]
    TargetEqualsInitial(Element),
    #[error("element {element}: {what}")]
    InvalidTarget { element: Element, what: &'static str },
    #[error("element {0} is singular on the current orbit")]
    Singular(Element),
    #[error("invalid guidance parameters: {0}")]
    InvalidParams(&'static str),
    #[error(transparent)]
    Orbital(#[from] OrbitalError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementTarget {
    pub target: f64,
    pub initial: f64,
    /// Direction weight W_dir (DAG only).
    pub weight: f64,
    pub tolerance: f64,
}

/// Per-element targets. Untargeted elements are simply absent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TargetSpec {
    targets: [Option<ElementTarget>; 5],
}

impl TargetSpec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a target with unit direction weight.
    pub fn with(self, element: Element, target: f64, initial: f64, tolerance: f64) -> Result<Self, GuidanceError> {
        self.with_weight(element, target, initial, 1.0, tolerance)
    }

    pub fn with_weight(
        mut self,
        element: Element,
        target: f64,
        initial: f64,
        weight: f64,
        tolerance: f64,
    ) -> Result<Self, GuidanceError> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(GuidanceError::InvalidTarget { element, what: "tolerance must be positive" });
        }
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(GuidanceError::InvalidTarget { element, what: "weight must be non-negative" });
        }
        if !target.is_finite() || !initial.is_finite() {
            return Err(GuidanceError::InvalidTarget { element, what: "values must be finite" });
        }
        if element.difference(target, initial) == 0.0 {
            return Err(GuidanceError::TargetEqualsInitial(element));
        }
        self.targets[element.index()] = Some(ElementTarget {
            target,
            initial,
            weight,
            tolerance,
        });
        Ok(self)
    }

    pub fn get(&self, element: Element) -> Option<&ElementTarget> {
        self.targets[element.index()].as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, &ElementTarget)> {
        Element::ALL.into_iter().filter_map(|el| self.get(el).map(|t| (el, t)))
    }

    pub fn is_empty(&self) -> bool {
        self.targets.iter().all(Option::is_none)
    }

    pub fn validate(&self) -> Result<(), GuidanceError> {
        if self.is_empty() {
            return Err(GuidanceError::NoTargets);
        }
        Ok(())
    }

    /// Remaining error `target − current` for a targeted element.
    pub fn error(&self, element: Element, coe: &ClassicalOrbitalElements) -> Option<f64> {
        self.get(element).map(|t| element.difference(t.target, element.value(coe)))
    }

    /// True when every targeted element is inside its tolerance.
    pub fn converged(&self, coe: &ClassicalOrbitalElements) -> bool {
        self.iter().all(|(el, t)| el.difference(t.target, el.value(coe)).abs() <= t.tolerance)
    }
}

/// In-plane (pitch) and out-of-plane (yaw) thrust angles, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThrustAngles {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Throttle {
    Fire,
    Coast,
}

/// Thrust direction in RIC plus on/off state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThrustCommand {
    pub direction: Vector3<f64>,
    pub throttle: Throttle,
    /// km/s².
    pub accel_magnitude: f64,
}

impl ThrustCommand {
    pub fn coast() -> Self {
        Self {
            direction: Vector3::zeros(),
            throttle: Throttle::Coast,
            accel_magnitude: 0.0,
        }
    }

    pub fn fire(direction: Vector3<f64>, accel_magnitude: f64) -> Self {
        Self {
            direction,
            throttle: Throttle::Fire,
            accel_magnitude,
        }
    }

    pub fn is_firing(&self) -> bool {
        self.throttle == Throttle::Fire
    }

    /// RIC acceleration vector, zero when coasting.
    pub fn acceleration(&self) -> Vector3<f64> {
        match self.throttle {
            Throttle::Fire => self.direction * self.accel_magnitude,
            Throttle::Coast => Vector3::zeros(),
        }
    }
}
