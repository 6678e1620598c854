use nalgebra::Vector3;

use super::{
    capture_merge, DebrisSource, GuidanceLaw, LogRow, MissionError, MissionLog, MissionPhase, ProximityResult,
    ScenarioConfig,
};
use crate::guidance::{best_direction, DagSession, Element, TargetSpec, ThrustCommand};
use crate::io::{parse_tle_lines, tle_to_coe};
use crate::maneuvers::{
    cw_two_impulse, deorbit, differential_correct, hohmann, BurnEvent, BurnFrame, CorrectionOptions, ManeuverError, PropulsionLedger,
};
use crate::orbital::{
    anomaly_convert, cartesian_to_coe, coe_to_cartesian, relative_state_ric, ric_basis, wrap_pi, AnomalyKind,
    CartesianState, ClassicalOrbitalElements, GravContext,
};
use crate::propagation::{
    propagate_cartesian, propagate_until, EventKind, EventSpec, IntegratorConfig, PerturbationConfig, ThrustProfile,
};

/// Initial debris elements from the scenario, converting a TLE if given.
pub fn debris_elements(cfg: &ScenarioConfig) -> Result<ClassicalOrbitalElements, MissionError> {
    match &cfg.debris {
        DebrisSource::Coe(d) => Ok(d.to_coe()?),
        DebrisSource::Tle { line1, line2 } => {
            let rec = parse_tle_lines(line1, line2)?;
            Ok(tle_to_coe(&rec, &GravContext::default())?)
        }
    }
}

/// Semi-major axis and inclination targets that carry `chaser` onto the
/// debris orbit. Elements already on target are left out.
pub fn transfer_targets(
    cfg: &ScenarioConfig,
    chaser: &ClassicalOrbitalElements,
    debris: &ClassicalOrbitalElements,
) -> Result<TargetSpec, MissionError> {
    let mut spec = TargetSpec::new();
    if debris.a != chaser.a {
        spec = spec.with(Element::A, debris.a, chaser.a, cfg.guidance.a_tol_km)?;
    }
    if debris.i != chaser.i {
        spec = spec.with(Element::I, debris.i, chaser.i, cfg.guidance.i_tol_deg.to_radians())?;
    }
    Ok(spec)
}

/// One steering evaluation at the scenario's initial chaser state.
pub fn guidance_step(cfg: &ScenarioConfig, law: GuidanceLaw) -> Result<ThrustCommand, MissionError> {
    cfg.validate().map_err(MissionError::InvalidConfig)?;
    let ctx = GravContext::default();
    let chaser = cfg.chaser_coe.to_coe()?;
    let debris = debris_elements(cfg)?;
    let spec = transfer_targets(cfg, &chaser, &debris)?;
    let accel = cfg.spacecraft.accel(cfg.spacecraft.wet_mass());
    if spec.is_empty() {
        return Ok(ThrustCommand::coast());
    }
    match law {
        GuidanceLaw::Dag => Ok(DagSession::new(cfg.guidance.throttle_threshold).command(&chaser, &spec, accel)),
        GuidanceLaw::Qlaw => Ok(best_direction(&chaser, &spec, &cfg.guidance.qlaw.to_params(), accel, &ctx)?),
        GuidanceLaw::Impulsive => Err(MissionError::InvalidConfig(
            "the impulsive law has no steering command; use dag or qlaw".into(),
        )),
    }
}

struct Sim<'a> {
    cfg: &'a ScenarioConfig,
    ctx: GravContext,
    pert: PerturbationConfig,
    integ: IntegratorConfig,
    chaser: CartesianState,
    debris: CartesianState,
    captured: bool,
    ledger: PropulsionLedger,
    phase: MissionPhase,
    logging: bool,
    rows: Vec<LogRow>,
    burns: Vec<BurnEvent>,
    phase_starts: Vec<(MissionPhase, f64)>,
    proximity: Option<ProximityResult>,
    capture_epoch: Option<f64>,
}

impl<'a> Sim<'a> {
    fn new(
        cfg: &'a ScenarioConfig,
        chaser: &ClassicalOrbitalElements,
        debris: &ClassicalOrbitalElements,
        logging: bool,
    ) -> Result<Self, MissionError> {
        let ctx = GravContext::default();
        let mut sim = Sim {
            cfg,
            ctx,
            pert: cfg.perturbation_config(),
            integ: cfg.integrator.to_config(),
            chaser: coe_to_cartesian(chaser, &ctx)?,
            debris: coe_to_cartesian(debris, &ctx)?,
            captured: false,
            ledger: PropulsionLedger::new(cfg.spacecraft),
            phase: MissionPhase::Initial,
            logging,
            rows: Vec::new(),
            burns: Vec::new(),
            phase_starts: Vec::new(),
            proximity: None,
            capture_epoch: None,
        };
        sim.enter(MissionPhase::Initial)?;
        Ok(sim)
    }

    fn enter(&mut self, phase: MissionPhase) -> Result<(), MissionError> {
        self.phase = phase;
        self.phase_starts.push((phase, self.chaser.epoch));
        self.record()
    }

    fn rel_position(&self) -> Result<Vector3<f64>, MissionError> {
        if self.captured {
            return Ok(Vector3::zeros());
        }
        Ok(relative_state_ric(&self.chaser, &self.debris)?.position)
    }

    fn record(&mut self) -> Result<(), MissionError> {
        if !self.logging {
            return Ok(());
        }
        let (coe, _) = cartesian_to_coe(&self.chaser, &self.ctx)?;
        let row = LogRow {
            epoch: self.chaser.epoch,
            phase: self.phase,
            chaser: self.chaser,
            chaser_coe: coe,
            debris: self.debris,
            ric: self.rel_position()?,
            mass: self.ledger.mass,
            cum_dv: self.ledger.total_dv,
        };
        match self.rows.last_mut() {
            Some(last) if last.epoch == row.epoch => *last = row,
            _ => self.rows.push(row),
        }
        Ok(())
    }

    fn period(&self) -> Result<f64, MissionError> {
        let (coe, _) = cartesian_to_coe(&self.chaser, &self.ctx)?;
        Ok(coe.period(&self.ctx))
    }

    /// Advances both bodies by `dt` (no logging), the chaser under `pert`.
    fn advance(&mut self, dt: f64, pert: &PerturbationConfig) -> Result<(), MissionError> {
        let t = self.chaser.epoch + dt;
        self.chaser = propagate_cartesian(&self.chaser, dt, pert, &self.integ)?.with_epoch(t);
        if self.captured {
            self.debris = self.chaser;
        } else {
            self.debris = propagate_cartesian(&self.debris, dt, &self.pert, &self.integ)?.with_epoch(t);
        }
        Ok(())
    }

    /// Coasts for `duration` seconds, logging every sample interval.
    fn coast(&mut self, duration: f64) -> Result<(), MissionError> {
        let end = self.chaser.epoch + duration;
        let pert = self.pert.clone();
        while end - self.chaser.epoch > 1e-9 {
            let dt = self.cfg.sample_interval.min(end - self.chaser.epoch);
            self.advance(dt, &pert)?;
            self.record()?;
        }
        Ok(())
    }

    /// Coasts to the first of `events` on the chaser trajectory.
    fn coast_until(&mut self, events: &[EventSpec], horizon: f64) -> Result<CartesianState, MissionError> {
        let (at, _) = propagate_until(&self.chaser, events, &self.pert, &self.integ, horizon)?;
        self.coast(at.epoch - self.chaser.epoch)?;
        Ok(at)
    }

    /// Applies an inertial impulse and books it in the chaser's pre-burn RIC.
    fn impulse(&mut self, label: &str, dv_eci: Vector3<f64>) -> Result<(), MissionError> {
        let basis = ric_basis(&self.chaser)?;
        let cost = self.ledger.burn(label, dv_eci.norm());
        let mut ev = BurnEvent::new(label, self.chaser.epoch, basis.to_ric(&dv_eci), BurnFrame::Ric);
        ev.propellant_used = cost.propellant;
        self.burns.push(ev);
        self.chaser.v += dv_eci;
        if self.captured {
            self.debris = self.chaser;
        }
        self.record()
    }

    /// Signed burn along the velocity vector, km/s.
    fn tangential(&mut self, label: &str, dv: f64) -> Result<(), MissionError> {
        let dir = self.chaser.v.normalize();
        self.impulse(label, dir * dv)
    }

    fn raise(&mut self, target_a: f64) -> Result<(), MissionError> {
        self.enter(MissionPhase::OrbitRaise)?;
        let (coe, _) = cartesian_to_coe(&self.chaser, &self.ctx)?;
        let plan = hohmann(coe.a, target_a, &self.ctx)?;
        if (coe.a - target_a).abs() <= 1e-9 * target_a {
            self.tangential("dv1_raise", 0.0)?;
            return self.tangential("dv2_raise", 0.0);
        }
        // The first burn goes where |r| = a, so the local speed equals the
        // circular speed the transfer formula assumes.
        if coe.e > 1e-6 {
            let nu = (-coe.e).acos();
            let events = [
                EventSpec::new(EventKind::TrueAnomalyCrossing(nu)),
                EventSpec::new(EventKind::TrueAnomalyCrossing(std::f64::consts::TAU - nu)),
            ];
            let horizon = 1.1 * self.period()?;
            self.coast_until(&events, horizon)?;
        }
        self.tangential("dv1_raise", plan.dv1)?;
        let horizon = 1.1 * self.period()?;
        let apo_event = if plan.dv1 > 0.0 { EventKind::Apoapsis } else { EventKind::Periapsis };
        self.coast_until(&[EventSpec::new(apo_event)], horizon)?;
        // Match the target energy exactly rather than the nominal dv2.
        let r = self.chaser.radius();
        let v_goal = (self.ctx.mu * (2.0 / r - 1.0 / target_a)).sqrt();
        let dv2 = v_goal - self.chaser.speed();
        self.tangential("dv2_raise", dv2)
    }

    fn plane_change(&mut self) -> Result<(), MissionError> {
        self.enter(MissionPhase::PlaneChange)?;
        let n_d = self.debris.angular_momentum().normalize();
        let n_c = self.chaser.angular_momentum().normalize();
        if n_c.dot(&n_d).clamp(-1.0, 1.0).acos() < 1e-10 {
            return self.impulse("dv3_plane_change", Vector3::zeros());
        }
        // Rotate at whichever line-of-nodes crossing has the larger radius.
        let spec = [EventSpec::new(EventKind::PlaneCrossing(n_d))];
        let horizon = 1.1 * self.period()?;
        let (first, _) = propagate_until(&self.chaser, &spec, &self.pert, &self.integ, horizon)?;
        let (second, _) = propagate_until(&first, &spec, &self.pert, &self.integ, horizon)?;
        let target = if first.radius() >= second.radius() { first } else { second };
        self.coast(target.epoch - self.chaser.epoch)?;

        let n_d = self.debris.angular_momentum().normalize();
        let r_hat = self.chaser.r.normalize();
        let v_r = self.chaser.v.dot(&r_hat);
        let v_h = (self.chaser.v - r_hat * v_r).norm();
        let along = n_d.cross(&r_hat).normalize();
        let v_new = r_hat * v_r + along * v_h;
        self.impulse("dv3_plane_change", v_new - self.chaser.v)
    }

    /// Low-thrust transfer onto the debris semi-major axis and inclination,
    /// summarized as a single burn record.
    fn guided_transfer(&mut self, law: GuidanceLaw, debris: &ClassicalOrbitalElements) -> Result<(), MissionError> {
        self.enter(MissionPhase::OrbitRaise)?;
        let (coe0, _) = cartesian_to_coe(&self.chaser, &self.ctx)?;
        let spec = transfer_targets(self.cfg, &coe0, debris)?;
        let label = match law {
            GuidanceLaw::Dag => "lt_transfer_dag",
            _ => "lt_transfer_qlaw",
        };
        let start = self.chaser.epoch;
        let mut session = DagSession::new(self.cfg.guidance.throttle_threshold);
        let params = self.cfg.guidance.qlaw.to_params();
        let ve = self.cfg.spacecraft.exhaust_velocity();
        let mut dv_ric = Vector3::zeros();
        let mut propellant = 0.0;
        let dt = self.cfg.sample_interval;
        loop {
            let (coe, _) = cartesian_to_coe(&self.chaser, &self.ctx)?;
            if spec.is_empty() || spec.converged(&coe) {
                break;
            }
            let elapsed = self.chaser.epoch - start;
            if elapsed >= self.cfg.guidance.max_duration_s {
                return Err(MissionError::GuidanceTimeout { elapsed_s: elapsed });
            }
            let accel = self.ledger.accel();
            let cmd = match law {
                GuidanceLaw::Dag => session.command(&coe, &spec, accel),
                _ => best_direction(&coe, &spec, &params, accel, &self.ctx)?,
            };
            if cmd.is_firing() {
                let pert = self.pert.clone().with_thrust(ThrustProfile::constant_ric(cmd.acceleration()));
                self.advance(dt, &pert)?;
                let m0 = self.ledger.mass;
                let dm = self.cfg.spacecraft.thrust * dt / ve;
                let dv = ve * (m0 / (m0 - dm)).ln() / 1000.0;
                self.ledger.spend(label, dm, dv);
                dv_ric += cmd.direction * dv;
                propellant += dm;
            } else {
                let pert = self.pert.clone();
                self.advance(dt, &pert)?;
            }
            self.record()?;
        }
        let mut ev = BurnEvent::new(label, start, dv_ric, BurnFrame::Ric);
        ev.propellant_used = propellant;
        self.burns.push(ev);
        Ok(())
    }

    fn drift(&mut self) -> Result<(), MissionError> {
        self.enter(MissionPhase::Drift)?;
        let p = self.cfg.phasing;
        let goal = Vector3::from(self.cfg.proximity_goal);
        let start = self.chaser.epoch;
        loop {
            let rel = self.rel_position()?;
            if (-p.window_max_km..=-p.window_min_km).contains(&rel.y) || (rel - goal).norm() <= p.window_min_km {
                return Ok(());
            }
            if self.chaser.epoch - start >= p.horizon_s {
                return Err(MissionError::PhasingWindowNotFound { horizon_s: p.horizon_s });
            }
            self.coast(self.cfg.sample_interval)?;
        }
    }

    fn chase(&mut self) -> Result<(), MissionError> {
        self.enter(MissionPhase::VBarChase)?;
        let goal = Vector3::from(self.cfg.proximity_goal);
        let (dcoe, _) = cartesian_to_coe(&self.debris, &self.ctx)?;
        let n = self.ctx.mean_motion(dcoe.a);
        let tof = self.cfg.phasing.chase_tof_periods * dcoe.period(&self.ctx);
        let rel = relative_state_ric(&self.chaser, &self.debris)?;
        let (dv0, _) = cw_two_impulse(&rel, &goal, tof, n)?;

        let basis = ric_basis(&self.debris)?;
        let (chaser, debris) = (self.chaser, self.debris);
        let debris_end = propagate_cartesian(&debris, tof, &self.pert, &self.integ)?;
        let (pert, integ) = (self.pert.clone(), self.integ);
        let plant = |dv: &Vector3<f64>| -> Result<Vector3<f64>, ManeuverError> {
            let mut c = chaser;
            c.v += basis.to_eci(dv);
            let c_end = propagate_cartesian(&c, tof, &pert, &integ)?;
            Ok(relative_state_ric(&c_end, &debris_end.with_epoch(c_end.epoch))?.position)
        };
        let opts = CorrectionOptions {
            tol: self.cfg.phasing.correction_tol_km,
            ..CorrectionOptions::default()
        };
        let corr = differential_correct(dv0, &goal, plant, &opts)?;
        self.impulse("dv4_chase_start", basis.to_eci(&corr.dv))?;
        self.coast(tof)?;

        // Null the relative velocity as seen from the rotating debris frame.
        let omega = self.debris.r.cross(&self.debris.v) / self.debris.r.norm_squared();
        let v_new = self.debris.v + omega.cross(&(self.chaser.r - self.debris.r));
        self.impulse("dv5_chase_end", v_new - self.chaser.v)?;

        self.enter(MissionPhase::Proximity)?;
        self.proximity = Some(ProximityResult {
            desired: goal,
            achieved: self.rel_position()?,
        });
        Ok(())
    }

    fn capture(&mut self) -> Result<(), MissionError> {
        let prox = self.proximity.expect("capture follows the chase");
        let cap = capture_merge(
            &self.ledger.config,
            self.ledger.mass,
            self.cfg.capture.debris_mass_kg,
            &self.debris,
            prox.miss(),
            self.cfg.capture.gate_km,
        )?;
        self.ledger.absorb(cap.mass - self.ledger.mass);
        self.chaser = cap.state;
        self.captured = true;
        self.capture_epoch = Some(self.chaser.epoch);
        self.enter(MissionPhase::Capture)?;
        self.coast(self.cfg.capture.dwell_s)
    }

    fn deorbit(&mut self) -> Result<(), MissionError> {
        self.enter(MissionPhase::Deorbit)?;
        let plan = deorbit(self.chaser.radius(), self.cfg.deorbit_altitude, &self.ctx)?;
        self.tangential("dv6_deorbit", plan.dv1)?;
        let horizon = 1.1 * self.period()?;
        self.coast_until(&[EventSpec::new(EventKind::Periapsis)], horizon)?;
        let r = self.chaser.radius();
        let dv = self.ctx.circular_speed(r) - self.chaser.speed();
        self.tangential("dv7_deorbit", dv)?;
        self.enter(MissionPhase::Complete)
    }

    fn transfer(&mut self, debris: &ClassicalOrbitalElements) -> Result<(), MissionError> {
        match self.cfg.guidance_law {
            GuidanceLaw::Impulsive => {
                self.raise(debris.a)?;
                self.plane_change()
            }
            law => self.guided_transfer(law, debris),
        }
    }
}

/// Angle (rad) by which the chaser leads the debris along the debris orbit.
fn lead_angle(chaser: &CartesianState, debris: &CartesianState) -> f64 {
    let h = debris.angular_momentum().normalize();
    debris.r.cross(&chaser.r).dot(&h).atan2(debris.r.dot(&chaser.r))
}

fn shift_mean_anomaly(coe: &ClassicalOrbitalElements, dm: f64) -> Result<ClassicalOrbitalElements, MissionError> {
    let m = anomaly_convert(coe.nu, coe.e, AnomalyKind::True, AnomalyKind::Mean)?;
    let nu = anomaly_convert(m + dm, coe.e, AnomalyKind::Mean, AnomalyKind::True)?;
    Ok(ClassicalOrbitalElements { nu, ..*coe })
}

/// Slides the debris along its orbit so that it leads the chaser by
/// `lead_km` when the transfer finishes.
fn align_debris(
    cfg: &ScenarioConfig,
    chaser: &ClassicalOrbitalElements,
    debris: &ClassicalOrbitalElements,
    lead_km: f64,
) -> Result<ClassicalOrbitalElements, MissionError> {
    let mut dry = Sim::new(cfg, chaser, debris, false)?;
    dry.transfer(debris)?;
    let c_end = dry.chaser;
    let t = c_end.epoch;
    let ctx = GravContext::default();
    let pert = cfg.perturbation_config();
    let integ = cfg.integrator.to_config();
    let mut shifted = *debris;
    for _ in 0..4 {
        let d0 = coe_to_cartesian(&shifted, &ctx)?;
        let d_end = propagate_cartesian(&d0, t, &pert, &integ)?.with_epoch(t);
        let err = wrap_pi(lead_angle(&c_end, &d_end) + lead_km / shifted.a);
        if err.abs() < 1e-12 {
            break;
        }
        shifted = shift_mean_anomaly(&shifted, err)?;
    }
    Ok(shifted)
}

/// Runs the full mission described by `cfg`.
pub fn run_mission(cfg: &ScenarioConfig) -> Result<MissionLog, MissionError> {
    cfg.validate().map_err(MissionError::InvalidConfig)?;
    let chaser = cfg.chaser_coe.to_coe()?;
    let mut debris = debris_elements(cfg)?;
    if let Some(lead) = cfg.phasing.align_lead_km {
        debris = align_debris(cfg, &chaser, &debris, lead)?;
    }

    let mut sim = Sim::new(cfg, &chaser, &debris, true)?;
    sim.transfer(&debris)?;
    sim.drift()?;
    sim.chase()?;
    sim.capture()?;
    sim.deorbit()?;

    Ok(MissionLog {
        name: cfg.name.clone(),
        law: cfg.guidance_law,
        j2: cfg.perturbations.j2,
        rows: sim.rows,
        burns: sim.burns,
        flags: sim.ledger.flags.clone(),
        phase_starts: sim.phase_starts,
        debris_initial: debris,
        proximity: sim.proximity,
        capture_epoch: sim.capture_epoch,
        final_mass: sim.ledger.mass,
    })
}
