//! End-to-end mission: raise, plane change, drift, chase, capture, de-orbit.

mod config;
mod report;
mod sim;

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use thiserror::Error;

use crate::guidance::GuidanceError;
use crate::io::TleError;
use crate::maneuvers::{BurnEvent, FeasibilityFlag, ManeuverError, SpacecraftConfig};
use crate::orbital::{CartesianState, ClassicalOrbitalElements, OrbitalError};
use crate::propagation::PropagationError;

pub use config::{
    CaptureSettings, DebrisSource, ElementsDeg, GuidanceLaw, GuidanceSettings, IntegratorMethod, IntegratorSettings,
    PerturbationSettings, PhasingSettings, QlawSettings, ScenarioConfig,
};
pub use report::{emit_reports, DvRow, MissionReport, ProximityRow};
pub use sim::{debris_elements, guidance_step, run_mission, transfer_targets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MissionPhase {
    Initial,
    OrbitRaise,
    PlaneChange,
    Drift,
    VBarChase,
    Proximity,
    Capture,
    Deorbit,
    Complete,
}

impl MissionPhase {
    pub const ALL: [MissionPhase; 9] = [
        MissionPhase::Initial,
        MissionPhase::OrbitRaise,
        MissionPhase::PlaneChange,
        MissionPhase::Drift,
        MissionPhase::VBarChase,
        MissionPhase::Proximity,
        MissionPhase::Capture,
        MissionPhase::Deorbit,
        MissionPhase::Complete,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MissionPhase::Initial => "initial",
            MissionPhase::OrbitRaise => "orbit_raise",
            MissionPhase::PlaneChange => "plane_change",
            MissionPhase::Drift => "drift",
            MissionPhase::VBarChase => "vbar_chase",
            MissionPhase::Proximity => "proximity",
            MissionPhase::Capture => "capture",
            MissionPhase::Deorbit => "deorbit",
            MissionPhase::Complete => "complete",
        }
    }
}

impl fmt::Display for MissionPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MissionPhase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MissionPhase::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown mission phase '{s}'"))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MissionError {
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
    #[error("debris TLE: {0}")]
    Tle(#[from] TleError),
    #[error("no phasing window within {horizon_s} s of drift")]
    PhasingWindowNotFound { horizon_s: f64 },
    #[error("proximity miss {miss_km:.6} km is outside the {gate_km} km capture gate")]
    CaptureGateMissed { miss_km: f64, gate_km: f64 },
    #[error("low-thrust transfer did not converge within {elapsed_s} s")]
    GuidanceTimeout { elapsed_s: f64 },
    #[error(transparent)]
    Guidance(#[from] GuidanceError),
    #[error(transparent)]
    Maneuver(#[from] ManeuverError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Orbital(#[from] OrbitalError),
}

/// One sample of the mission time series.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub epoch: f64,
    pub phase: MissionPhase,
    pub chaser: CartesianState,
    pub chaser_coe: ClassicalOrbitalElements,
    pub debris: CartesianState,
    /// Chaser position relative to the debris, RIC km. Zero after capture.
    pub ric: Vector3<f64>,
    /// kg
    pub mass: f64,
    /// km/s
    pub cum_dv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProximityResult {
    /// RIC km
    pub desired: Vector3<f64>,
    pub achieved: Vector3<f64>,
}

impl ProximityResult {
    pub fn miss(&self) -> f64 {
        (self.achieved - self.desired).norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionLog {
    pub name: String,
    pub law: GuidanceLaw,
    pub j2: bool,
    pub rows: Vec<LogRow>,
    pub burns: Vec<BurnEvent>,
    pub flags: Vec<FeasibilityFlag>,
    /// Epoch at which each phase was entered.
    pub phase_starts: Vec<(MissionPhase, f64)>,
    /// Debris elements actually flown, after any phase alignment.
    pub debris_initial: ClassicalOrbitalElements,
    pub proximity: Option<ProximityResult>,
    pub capture_epoch: Option<f64>,
    pub final_mass: f64,
}

impl MissionLog {
    pub fn total_dv(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.cum_dv)
    }

    pub fn duration(&self) -> f64 {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) => b.epoch - a.epoch,
            _ => 0.0,
        }
    }

    pub fn burn(&self, label: &str) -> Option<&BurnEvent> {
        self.burns.iter().find(|b| b.label == label)
    }
}

/// Chaser after docking: masses add and the pair follows the debris orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capture {
    /// Spacecraft with the debris counted as dry mass.
    pub config: SpacecraftConfig,
    pub mass: f64,
    pub state: CartesianState,
}

/// Merges the debris into the chaser if the proximity miss is inside the gate.
pub fn capture_merge(
    config: &SpacecraftConfig,
    chaser_mass: f64,
    debris_mass: f64,
    debris_state: &CartesianState,
    miss_km: f64,
    gate_km: f64,
) -> Result<Capture, MissionError> {
    if !(miss_km <= gate_km) {
        return Err(MissionError::CaptureGateMissed { miss_km, gate_km });
    }
    if !(debris_mass >= 0.0) {
        return Err(MissionError::InvalidConfig(format!("debris mass {debris_mass} kg")));
    }
    let mut merged = *config;
    merged.dry_mass += debris_mass;
    Ok(Capture {
        config: merged,
        mass: chaser_mass + debris_mass,
        state: *debris_state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_names_round_trip() {
        for p in MissionPhase::ALL {
            assert_eq!(p.as_str().parse::<MissionPhase>().unwrap(), p);
        }
        assert!("warp".parse::<MissionPhase>().is_err());
    }

    #[test]
    fn merge_adds_mass() {
        let s = CartesianState::new(Vector3::new(7000.0, 0.0, 0.0), Vector3::new(0.0, 7.5, 0.0), 10.0);
        let cfg = SpacecraftConfig::default();
        let c = capture_merge(&cfg, 22.0, 100.0, &s, 0.001, 0.005).unwrap();
        assert_eq!(c.mass, 122.0);
        assert_eq!(c.config.dry_mass, 120.0);
        assert_eq!(c.state, s);
        let same = capture_merge(&cfg, 22.0, 0.0, &s, 0.0, 0.005).unwrap();
        assert_eq!(same.config, cfg);
        assert!(matches!(
            capture_merge(&cfg, 22.0, 100.0, &s, 0.01, 0.005),
            Err(MissionError::CaptureGateMissed { .. })
        ));
    }
}
