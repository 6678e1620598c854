use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::ManeuverError;

/// Standard gravity, m/s².
pub const G0: f64 = 9.80665;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BurnFrame {
    Ric,
    Vnc,
    Eci,
}

impl fmt::Display for BurnFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BurnFrame::Ric => "RIC",
            BurnFrame::Vnc => "VNC",
            BurnFrame::Eci => "ECI",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BurnEvent {
    /// s
    pub epoch: f64,
    /// km/s
    pub dv: Vector3<f64>,
    pub frame: BurnFrame,
    pub label: String,
    /// kg
    pub propellant_used: f64,
}

impl BurnEvent {
    pub fn new(label: impl Into<String>, epoch: f64, dv: Vector3<f64>, frame: BurnFrame) -> Self {
        Self {
            epoch,
            dv,
            frame,
            label: label.into(),
            propellant_used: 0.0,
        }
    }

    /// km/s
    pub fn magnitude(&self) -> f64 {
        self.dv.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpacecraftConfig {
    /// kg
    pub dry_mass: f64,
    /// kg
    pub propellant_mass: f64,
    /// N
    pub thrust: f64,
    /// s
    pub isp: f64,
    /// N·s
    pub total_impulse_budget: f64,
}

impl Default for SpacecraftConfig {
    fn default() -> Self {
        Self {
            dry_mass: 20.0,
            propellant_mass: 4.0,
            thrust: 0.4,
            isp: 200.0,
            total_impulse_budget: 1036.0,
        }
    }
}

impl SpacecraftConfig {
    pub fn validate(&self) -> Result<(), ManeuverError> {
        let ok = [self.dry_mass, self.propellant_mass, self.thrust, self.isp, self.total_impulse_budget]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if !ok {
            return Err(ManeuverError::InvalidInput("spacecraft parameters must be positive and finite".into()));
        }
        Ok(())
    }

    pub fn wet_mass(&self) -> f64 {
        self.dry_mass + self.propellant_mass
    }

    /// Effective exhaust velocity, m/s.
    pub fn exhaust_velocity(&self) -> f64 {
        self.isp * G0
    }

    /// Thrust acceleration at `mass`, km/s².
    pub fn accel(&self, mass: f64) -> f64 {
        self.thrust / mass / 1000.0
    }
}

fn rocket(dv_kms: f64, ve: f64, mass: f64) -> f64 {
    mass * (1.0 - (-dv_kms * 1000.0 / ve).exp())
}

/// Propellant (kg) and burn duration (s) for `dv` km/s from `current_mass`.
pub fn propellant_for_dv(
    dv: f64,
    config: &SpacecraftConfig,
    current_mass: f64,
) -> Result<(f64, f64), ManeuverError> {
    config.validate()?;
    if !(dv >= 0.0) || !dv.is_finite() {
        return Err(ManeuverError::InvalidInput(format!("dv must be non-negative, got {dv}")));
    }
    if !(current_mass > config.dry_mass) {
        return Err(ManeuverError::InvalidInput(format!(
            "current mass {current_mass} kg must exceed dry mass {} kg",
            config.dry_mass
        )));
    }
    let dm = rocket(dv, config.exhaust_velocity(), current_mass);
    Ok((dm, dm * config.exhaust_velocity() / config.thrust))
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityFlag {
    PropellantExhausted { label: String, deficit_kg: f64 },
    ImpulseBudgetExceeded { label: String, deficit_ns: f64 },
}

impl fmt::Display for FeasibilityFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeasibilityFlag::PropellantExhausted { label, deficit_kg } => {
                write!(f, "propellant exhausted at {label} ({deficit_kg:.4} kg short)")
            }
            FeasibilityFlag::ImpulseBudgetExceeded { label, deficit_ns } => {
                write!(f, "impulse budget exceeded at {label} ({deficit_ns:.3} N·s over)")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurnCost {
    /// kg
    pub propellant: f64,
    /// s
    pub duration: f64,
    /// N·s
    pub impulse: f64,
}

/// Running mass, propellant and total-impulse account. Budgets may go
/// negative: the first overrun of each kind is recorded as a flag and the
/// run carries on.
#[derive(Debug, Clone, PartialEq)]
pub struct PropulsionLedger {
    pub config: SpacecraftConfig,
    pub mass: f64,
    pub propellant_remaining: f64,
    pub impulse_remaining: f64,
    /// km/s
    pub total_dv: f64,
    pub flags: Vec<FeasibilityFlag>,
}

impl PropulsionLedger {
    pub fn new(config: SpacecraftConfig) -> Self {
        Self {
            config,
            mass: config.wet_mass(),
            propellant_remaining: config.propellant_mass,
            impulse_remaining: config.total_impulse_budget,
            total_dv: 0.0,
            flags: Vec::new(),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.flags.is_empty()
    }

    /// Thrust acceleration at the current mass, km/s².
    pub fn accel(&self) -> f64 {
        self.config.accel(self.mass)
    }

    /// Books a burn of `dv` km/s.
    pub fn burn(&mut self, label: &str, dv: f64) -> BurnCost {
        let ve = self.config.exhaust_velocity();
        let dm = rocket(dv.abs(), ve, self.mass);
        self.spend(label, dm, dv.abs())
    }

    /// Books propellant burned by a finite arc directly.
    pub fn spend(&mut self, label: &str, dm: f64, dv: f64) -> BurnCost {
        let ve = self.config.exhaust_velocity();
        let impulse = dm * ve;
        let had_prop = self.propellant_remaining >= 0.0;
        let had_impulse = self.impulse_remaining >= 0.0;
        self.mass -= dm;
        self.propellant_remaining -= dm;
        self.impulse_remaining -= impulse;
        self.total_dv += dv;
        if had_prop && self.propellant_remaining < 0.0 {
            self.flags.push(FeasibilityFlag::PropellantExhausted {
                label: label.to_string(),
                deficit_kg: -self.propellant_remaining,
            });
        }
        if had_impulse && self.impulse_remaining < 0.0 {
            self.flags.push(FeasibilityFlag::ImpulseBudgetExceeded {
                label: label.to_string(),
                deficit_ns: -self.impulse_remaining,
            });
        }
        BurnCost {
            propellant: dm,
            duration: impulse / self.config.thrust,
            impulse,
        }
    }

    /// Adds a captured body's mass.
    pub fn absorb(&mut self, extra_mass: f64) {
        self.mass += extra_mass;
    }
}
