use serde::{Deserialize, Serialize};

use crate::guidance::QlawParams;
use crate::maneuvers::SpacecraftConfig;
use crate::orbital::{ClassicalOrbitalElements, GravContext, OrbitalError};
use crate::propagation::{IntegratorConfig, PerturbationConfig};

/// Classical elements with angles in degrees, as written in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementsDeg {
    pub a_km: f64,
    pub e: f64,
    pub i_deg: f64,
    pub raan_deg: f64,
    pub argp_deg: f64,
    pub nu_deg: f64,
}

impl ElementsDeg {
    pub fn to_coe(&self) -> Result<ClassicalOrbitalElements, OrbitalError> {
        ClassicalOrbitalElements::from_degrees(self.a_km, self.e, self.i_deg, self.raan_deg, self.argp_deg, self.nu_deg)
    }

    pub fn from_coe(c: &ClassicalOrbitalElements) -> Self {
        Self {
            a_km: c.a,
            e: c.e,
            i_deg: c.i.to_degrees(),
            raan_deg: c.raan.to_degrees(),
            argp_deg: c.argp.to_degrees(),
            nu_deg: c.nu.to_degrees(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum DebrisSource {
    Coe(ElementsDeg),
    Tle { line1: String, line2: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuidanceLaw {
    Dag,
    Qlaw,
    #[default]
    #[serde(alias = "impulsive_only")]
    Impulsive,
}

impl std::str::FromStr for GuidanceLaw {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dag" => Ok(GuidanceLaw::Dag),
            "qlaw" => Ok(GuidanceLaw::Qlaw),
            "impulsive" | "impulsive_only" => Ok(GuidanceLaw::Impulsive),
            other => Err(format!("unknown guidance law '{other}' (expected dag, qlaw or impulsive)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PerturbationSettings {
    pub j2: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorMethod {
    #[default]
    Rkf45,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSettings {
    pub method: IntegratorMethod,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// s
    pub min_step: f64,
    /// s
    pub max_step: f64,
    /// Fixed step for rk4, s.
    pub step: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        let IntegratorConfig::Rkf45 { rel_tol, abs_tol, min_step, max_step } = IntegratorConfig::default() else {
            unreachable!()
        };
        Self {
            method: IntegratorMethod::Rkf45,
            rel_tol,
            abs_tol,
            min_step,
            max_step,
            step: 10.0,
        }
    }
}

impl IntegratorSettings {
    pub fn to_config(&self) -> IntegratorConfig {
        match self.method {
            IntegratorMethod::Rkf45 => IntegratorConfig::Rkf45 {
                rel_tol: self.rel_tol,
                abs_tol: self.abs_tol,
                min_step: self.min_step,
                max_step: self.max_step,
            },
            IntegratorMethod::Rk4 => IntegratorConfig::Rk4Fixed { step: self.step },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhasingSettings {
    /// Chase starts when the debris leads by an in-track distance in
    /// [window_min_km, window_max_km].
    pub window_min_km: f64,
    pub window_max_km: f64,
    /// Longest drift before giving up, s.
    pub horizon_s: f64,
    /// When set, the debris start is shifted along its orbit so that it
    /// leads the chaser by this distance once the plane change is done.
    pub align_lead_km: Option<f64>,
    /// Chase time of flight in debris periods.
    pub chase_tof_periods: f64,
    /// Differential-correction position tolerance, km.
    pub correction_tol_km: f64,
}

impl Default for PhasingSettings {
    fn default() -> Self {
        Self {
            window_min_km: 0.2,
            window_max_km: 2.0,
            horizon_s: 3.0 * 86400.0,
            align_lead_km: None,
            chase_tof_periods: 0.75,
            correction_tol_km: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CaptureSettings {
    pub gate_km: f64,
    pub dwell_s: f64,
    pub debris_mass_kg: f64,
}

impl Default for CaptureSettings {
    fn default() -> Self {
        Self {
            gate_km: 0.005,
            dwell_s: 7200.0,
            debris_mass_kg: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QlawSettings {
    pub w_a: f64,
    pub w_e: f64,
    pub w_i: f64,
    pub w_raan: f64,
    pub w_argp: f64,
    pub w_p: f64,
    pub k: f64,
    pub r_pmin_km: f64,
}

impl Default for QlawSettings {
    fn default() -> Self {
        let p = QlawParams::default();
        Self {
            w_a: p.weights[0],
            w_e: p.weights[1],
            w_i: p.weights[2],
            w_raan: p.weights[3],
            w_argp: p.weights[4],
            w_p: p.w_p,
            k: p.k,
            r_pmin_km: p.r_pmin,
        }
    }
}

impl QlawSettings {
    pub fn to_params(&self) -> QlawParams {
        QlawParams {
            weights: [self.w_a, self.w_e, self.w_i, self.w_raan, self.w_argp],
            w_p: self.w_p,
            k: self.k,
            r_pmin: self.r_pmin_km,
            ..QlawParams::default()
        }
    }
}

/// Low-thrust transfer settings used by the dag and qlaw laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GuidanceSettings {
    pub a_tol_km: f64,
    pub i_tol_deg: f64,
    pub throttle_threshold: f64,
    /// Give up on the transfer after this long, s.
    pub max_duration_s: f64,
    pub qlaw: QlawSettings,
}

impl Default for GuidanceSettings {
    fn default() -> Self {
        Self {
            a_tol_km: 1.0,
            i_tol_deg: 0.01,
            throttle_threshold: 0.0,
            max_duration_s: 10.0 * 86400.0,
            qlaw: QlawSettings::default(),
        }
    }
}

fn default_name() -> String {
    "scenario".into()
}

fn default_goal() -> [f64; 3] {
    [0.0, 0.001, 0.0]
}

fn default_deorbit() -> f64 {
    250.0
}

fn default_sample() -> f64 {
    10.0
}

/// Everything needed to run one mission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub chaser_coe: ElementsDeg,
    pub debris: DebrisSource,
    #[serde(default)]
    pub spacecraft: SpacecraftConfig,
    #[serde(default)]
    pub guidance_law: GuidanceLaw,
    /// Final chaser position relative to the debris, RIC km.
    #[serde(default = "default_goal")]
    pub proximity_goal: [f64; 3],
    /// km
    #[serde(default = "default_deorbit")]
    pub deorbit_altitude: f64,
    #[serde(default)]
    pub perturbations: PerturbationSettings,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    /// s
    #[serde(default = "default_sample")]
    pub sample_interval: f64,
    #[serde(default)]
    pub phasing: PhasingSettings,
    #[serde(default)]
    pub capture: CaptureSettings,
    #[serde(default)]
    pub guidance: GuidanceSettings,
}

impl ScenarioConfig {
    /// Reference chaser and PSLV debris with the library defaults.
    pub fn reference() -> Self {
        Self {
            name: "reference".into(),
            chaser_coe: ElementsDeg {
                a_km: 6928.14,
                e: 0.00472,
                i_deg: 95.0,
                raan_deg: 140.372,
                argp_deg: 216.9,
                nu_deg: 120.0,
            },
            debris: DebrisSource::Coe(ElementsDeg {
                a_km: 7046.14,
                e: 0.0,
                i_deg: 98.3,
                raan_deg: 140.372,
                argp_deg: 0.0,
                nu_deg: 0.0,
            }),
            spacecraft: SpacecraftConfig::default(),
            guidance_law: GuidanceLaw::Impulsive,
            proximity_goal: default_goal(),
            deorbit_altitude: default_deorbit(),
            perturbations: PerturbationSettings::default(),
            integrator: IntegratorSettings::default(),
            sample_interval: default_sample(),
            phasing: PhasingSettings {
                align_lead_km: Some(1.0),
                ..PhasingSettings::default()
            },
            capture: CaptureSettings::default(),
            guidance: GuidanceSettings::default(),
        }
    }

    pub fn perturbation_config(&self) -> PerturbationConfig {
        PerturbationConfig {
            ctx: GravContext::default(),
            include_j2: self.perturbations.j2,
            thrust: None,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        self.chaser_coe.to_coe().map_err(|e| format!("chaser_coe: {e}"))?;
        if let DebrisSource::Coe(d) = &self.debris {
            d.to_coe().map_err(|e| format!("debris.coe: {e}"))?;
        }
        self.spacecraft.validate().map_err(|e| format!("spacecraft: {e}"))?;
        if !(self.proximity_goal[1] >= 0.0) || self.proximity_goal.iter().any(|v| !v.is_finite()) {
            return Err("proximity_goal: in-track component must be >= 0".into());
        }
        if !(self.deorbit_altitude > crate::propagation::REENTRY_ALTITUDE_KM) {
            return Err("deorbit_altitude: must be above 100 km".into());
        }
        if !(self.sample_interval > 0.0) {
            return Err("sample_interval: must be positive".into());
        }
        self.integrator.to_config().validate().map_err(|e| format!("integrator: {e}"))?;
        let p = &self.phasing;
        if !(p.window_min_km >= 0.0 && p.window_max_km > p.window_min_km) {
            return Err("phasing: need 0 <= window_min_km < window_max_km".into());
        }
        if !(p.horizon_s >= 0.0 && p.chase_tof_periods > 0.0 && p.correction_tol_km > 0.0) {
            return Err("phasing: horizon, chase time of flight and tolerance must be positive".into());
        }
        if !(self.capture.gate_km > 0.0 && self.capture.dwell_s >= 0.0 && self.capture.debris_mass_kg >= 0.0) {
            return Err("capture: gate must be positive, dwell and debris mass non-negative".into());
        }
        let g = &self.guidance;
        if !(g.a_tol_km > 0.0 && g.i_tol_deg > 0.0 && g.max_duration_s > 0.0) {
            return Err("guidance: tolerances and max duration must be positive".into());
        }
        Ok(())
    }
}
