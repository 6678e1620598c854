//! Impulsive maneuver planning and propellant bookkeeping.

mod cw;
mod impulsive;
mod propellant;

use nalgebra::Vector3;
use thiserror::Error;

use crate::orbital::OrbitalError;
use crate::propagation::PropagationError;

pub use cw::{cw_propagate, cw_two_impulse, differential_correct, CorrectionOptions, Correction};
pub use impulsive::{deorbit, hohmann, plane_change, HohmannPlan};
pub use propellant::{
    propellant_for_dv, BurnCost, BurnEvent, BurnFrame, FeasibilityFlag, PropulsionLedger, SpacecraftConfig, G0,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ManeuverError {
    #[error("radius {radius} km is not above the body surface")]
    InvalidRadius { radius: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular transfer time {tof} s: {reason}")]
    SingularTransfer { tof: f64, reason: &'static str },
    #[error("differential correction did not converge: residual {residual} km after {iterations} iterations")]
    NotConverged {
        best: Vector3<f64>,
        residual: f64,
        iterations: usize,
    },
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Orbital(#[from] OrbitalError),
}
