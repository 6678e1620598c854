use nalgebra::Vector3;

use super::integrator::{integrate, Crossing, EventFn, State6};
use super::{check_duration, dynamics, pack, reentry_guard, unpack, IntegratorConfig, PerturbationConfig, PropagationError};
use crate::orbital::{cartesian_to_coe, CartesianState, GravContext};

/// Something propagation can stop on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// Absolute epoch, seconds.
    TimeReached(f64),
    Periapsis,
    Apoapsis,
    AscendingNode,
    /// True anomaly (rad) crossed in the direction of motion. On near-circular
    /// orbits this is the argument of latitude.
    TrueAnomalyCrossing(f64),
    /// Position crosses the plane with the given normal, either direction.
    PlaneCrossing(Vector3<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventSpec {
    pub kind: EventKind,
    /// Time tolerance of the located event, seconds.
    pub tolerance: f64,
}

impl EventSpec {
    pub fn new(kind: EventKind) -> Self {
        Self { kind, tolerance: 1e-6 }
    }
}

impl From<EventKind> for EventSpec {
    fn from(kind: EventKind) -> Self {
        Self::new(kind)
    }
}

fn event_fn(spec: &EventSpec, ctx: GravContext) -> Option<EventFn<'static>> {
    let (g, crossing): (Box<dyn Fn(f64, &State6) -> f64>, Crossing) = match spec.kind {
        EventKind::TimeReached(_) => return None,
        EventKind::Periapsis => (Box::new(|_, y| y[0] * y[3] + y[1] * y[4] + y[2] * y[5]), Crossing::Rising),
        EventKind::Apoapsis => (Box::new(|_, y| y[0] * y[3] + y[1] * y[4] + y[2] * y[5]), Crossing::Falling),
        EventKind::AscendingNode => (Box::new(|_, y| y[2]), Crossing::Rising),
        EventKind::TrueAnomalyCrossing(target) => (
            Box::new(move |t, y| match cartesian_to_coe(&unpack(y, t), &ctx) {
                Ok((coe, _)) => (coe.nu - target).sin(),
                Err(_) => f64::NAN,
            }),
            Crossing::Rising,
        ),
        EventKind::PlaneCrossing(normal) => {
            let n = normal.normalize();
            (Box::new(move |_, y| y[0] * n.x + y[1] * n.y + y[2] * n.z), Crossing::Either)
        }
    };
    Some(EventFn {
        g,
        crossing,
        time_tol: spec.tolerance,
    })
}

/// Propagates until the first of `events` occurs, returning the state there
/// and the index of the event. Fails with `HorizonExceeded` if nothing fires
/// within `horizon` seconds.
pub fn propagate_until(
    state: &CartesianState,
    events: &[EventSpec],
    pert: &PerturbationConfig,
    integ: &IntegratorConfig,
    horizon: f64,
) -> Result<(CartesianState, usize), PropagationError> {
    check_duration(horizon)?;
    integ.validate()?;
    if events.is_empty() {
        return Err(PropagationError::InvalidConfig("no events given".into()));
    }
    for ev in events {
        if !(ev.tolerance > 0.0) {
            return Err(PropagationError::InvalidConfig("event tolerance must be positive".into()));
        }
        if let EventKind::PlaneCrossing(n) = ev.kind {
            if !(n.norm() > 0.0) {
                return Err(PropagationError::InvalidConfig("plane normal must be non-zero".into()));
            }
        }
    }

    let mut t_end = state.epoch + horizon;
    let mut timed: Option<usize> = None;
    for (idx, ev) in events.iter().enumerate() {
        if let EventKind::TimeReached(t) = ev.kind {
            if t <= state.epoch {
                return Ok((*state, idx));
            }
            if t <= t_end && timed.is_none_or(|j| matches!(events[j].kind, EventKind::TimeReached(tj) if t < tj)) {
                t_end = t;
                timed = Some(idx);
            }
        }
    }

    let mut fns = Vec::new();
    let mut index = Vec::new();
    for (idx, ev) in events.iter().enumerate() {
        if let Some(f) = event_fn(ev, pert.ctx) {
            fns.push(f);
            index.push(idx);
        }
    }

    let mut rhs = |t: f64, y: &State6| dynamics::cartesian_rhs(t, y, pert);
    let guard = reentry_guard(pert.ctx);
    let out = integrate(&mut rhs, state.epoch, pack(state), t_end, integ, &fns, &guard, &mut |_, _| {})?;
    let end = unpack(&out.y, out.t);
    match (out.event, timed) {
        (Some(k), _) => Ok((end, index[k])),
        (None, Some(idx)) => Ok((end, idx)),
        (None, None) => Err(PropagationError::HorizonExceeded { horizon }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbital::{coe_to_cartesian, ClassicalOrbitalElements};
    use std::f64::consts::PI;

    fn start(e: f64, nu_deg: f64) -> CartesianState {
        let coe = ClassicalOrbitalElements::from_degrees(7200.0, e, 40.0, 20.0, 30.0, nu_deg).unwrap();
        coe_to_cartesian(&coe, &GravContext::default()).unwrap()
    }

    fn nu_of(s: &CartesianState) -> f64 {
        cartesian_to_coe(s, &GravContext::default()).unwrap().0.nu
    }

    #[test]
    fn apoapsis_then_periapsis() {
        let s = start(0.05, 10.0);
        let pert = PerturbationConfig::default();
        let integ = IntegratorConfig::default();
        let (apo, k) = propagate_until(&s, &[EventKind::Apoapsis.into(), EventKind::Periapsis.into()], &pert, &integ, 1e5).unwrap();
        assert_eq!(k, 0);
        assert!((nu_of(&apo) - PI).abs() < 1e-6);
        let (peri, k) = propagate_until(&apo, &[EventKind::Apoapsis.into(), EventKind::Periapsis.into()], &pert, &integ, 1e5).unwrap();
        assert_eq!(k, 1);
        let nu = nu_of(&peri);
        assert!(nu.min(2.0 * PI - nu) < 1e-6);
    }

    #[test]
    fn time_event_is_exact() {
        let s = start(0.01, 0.0);
        let (out, k) = propagate_until(
            &s,
            &[EventKind::Periapsis.into(), EventKind::TimeReached(500.0).into()],
            &PerturbationConfig::default(),
            &IntegratorConfig::default(),
            1e4,
        )
        .unwrap();
        assert_eq!(k, 1);
        assert_eq!(out.epoch, 500.0);
    }

    #[test]
    fn true_anomaly_and_node() {
        let s = start(0.02, 0.0);
        let pert = PerturbationConfig::default();
        let integ = IntegratorConfig::default();
        let (out, _) = propagate_until(&s, &[EventKind::TrueAnomalyCrossing(2.0).into()], &pert, &integ, 1e4).unwrap();
        assert!((nu_of(&out) - 2.0).abs() < 1e-6);
        let (node, _) = propagate_until(&s, &[EventKind::AscendingNode.into()], &pert, &integ, 1e4).unwrap();
        assert!(node.r.z.abs() < 1e-4 && node.v.z > 0.0);
    }

    #[test]
    fn plane_crossing() {
        let s = start(0.0, 5.0);
        let n = Vector3::new(0.3, -0.2, 0.9);
        let (out, _) = propagate_until(&s, &[EventKind::PlaneCrossing(n).into()], &PerturbationConfig::default(), &IntegratorConfig::default(), 1e4).unwrap();
        assert!(out.r.dot(&n.normalize()).abs() < 1e-4);
    }

    #[test]
    fn horizon_exceeded() {
        let s = start(0.01, 10.0);
        let r = propagate_until(&s, &[EventKind::Apoapsis.into()], &PerturbationConfig::default(), &IntegratorConfig::default(), 100.0);
        assert!(matches!(r, Err(PropagationError::HorizonExceeded { .. })));
    }
}
