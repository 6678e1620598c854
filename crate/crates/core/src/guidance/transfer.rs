use super::{best_direction, DagSession, GuidanceError, QlawParams, TargetSpec, ThrustCommand};
use crate::orbital::{ClassicalOrbitalElements, GravContext};
use crate::propagation::{propagate_gve, IntegratorConfig, PerturbationConfig, ThrustProfile};

/// Steering law driven by [`fly_transfer`].
#[derive(Debug, Clone)]
pub enum SteeringLaw {
    Dag(DagSession),
    Qlaw(QlawParams),
}

impl SteeringLaw {
    pub fn command(
        &mut self,
        coe: &ClassicalOrbitalElements,
        spec: &TargetSpec,
        accel: f64,
        ctx: &GravContext,
    ) -> Result<ThrustCommand, GuidanceError> {
        match self {
            SteeringLaw::Dag(s) => Ok(s.command(coe, spec, accel)),
            SteeringLaw::Qlaw(p) => best_direction(coe, spec, p, accel, ctx),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransferOptions {
    /// Thrust acceleration, km/s². Held constant (no mass depletion).
    pub accel: f64,
    /// Zero-order-hold interval, s.
    pub hold: f64,
    /// s
    pub max_duration: f64,
    pub include_j2: bool,
    pub integrator: IntegratorConfig,
}

impl Default for TransferOptions {
    fn default() -> Self {
        Self {
            accel: 1e-7,
            hold: 60.0,
            max_duration: 365.0 * 86400.0,
            include_j2: false,
            integrator: IntegratorConfig::Rkf45 {
                rel_tol: 1e-10,
                abs_tol: 1e-10,
                min_step: 1e-6,
                max_step: 600.0,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferResult {
    /// Elements at the start of every hold interval, plus the final state.
    pub samples: Vec<(f64, ClassicalOrbitalElements)>,
    pub converged: bool,
    /// s
    pub elapsed: f64,
    /// Accumulated thrust dv, km/s.
    pub dv: f64,
}

impl TransferResult {
    pub fn final_elements(&self) -> ClassicalOrbitalElements {
        self.samples.last().expect("at least the initial sample").1
    }
}

/// Closed-loop transfer on the Gauss variational equations: the law is
/// sampled every `hold` seconds and its command held in the RIC frame.
/// Stops when every target is inside tolerance or at `max_duration`.
pub fn fly_transfer(
    coe0: &ClassicalOrbitalElements,
    spec: &TargetSpec,
    law: &mut SteeringLaw,
    opts: &TransferOptions,
    ctx: &GravContext,
) -> Result<TransferResult, GuidanceError> {
    spec.validate()?;
    if !(opts.accel > 0.0 && opts.hold > 0.0 && opts.max_duration > 0.0) {
        return Err(GuidanceError::InvalidParams("accel, hold and max_duration must be positive"));
    }
    let base = PerturbationConfig {
        ctx: *ctx,
        include_j2: opts.include_j2,
        thrust: None,
    };
    let mut coe = *coe0;
    let mut t = 0.0;
    let mut dv = 0.0;
    let mut samples = vec![(0.0, coe)];
    let converged = loop {
        if spec.converged(&coe) {
            break true;
        }
        if t >= opts.max_duration {
            break false;
        }
        let cmd = law.command(&coe, spec, opts.accel, ctx)?;
        let pert = if cmd.is_firing() {
            dv += opts.accel * opts.hold;
            base.clone().with_thrust(ThrustProfile::constant_ric(cmd.acceleration()))
        } else {
            base.clone()
        };
        coe = propagate_gve(&coe, opts.hold, &pert, &opts.integrator)?;
        t += opts.hold;
        samples.push((t, coe));
    };
    Ok(TransferResult {
        samples,
        converged,
        elapsed: t,
        dv,
    })
}
