//! Directional Adaptive Guidance.
//!
//! Each targeted element has a closed-form thrust direction that maximizes
//! its instantaneous rate. Those unit vectors are blended with weights
//! R·W_dir, where R is the fraction of the original error still remaining,
//! and the sum is normalized. Elements inside tolerance drop out of the sum.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Vector3;

use super::{Element, ElementTarget, GuidanceError, TargetSpec, ThrustAngles, ThrustCommand};
use crate::orbital::ClassicalOrbitalElements;

/// Adaptive ratios are clamped to ±R_MAX.
pub const R_MAX: f64 = 1.5;

/// Below these values ω (and, for inclination, Ω) steering is dropped.
pub const STEERING_ECC_MIN: f64 = 1e-4;
pub const STEERING_INC_MIN: f64 = 1e-4;

fn sgn(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Thrust angles that maximize the instantaneous increase of `element`.
pub fn angles_for_element(element: Element, coe: &ClassicalOrbitalElements) -> Result<ThrustAngles, GuidanceError> {
    let e = coe.e;
    let (st, ct) = coe.nu.sin_cos();
    let u = coe.arg_latitude();
    let angles = match element {
        Element::A => ThrustAngles {
            alpha: (e * st).atan2(1.0 + e * ct),
            beta: 0.0,
        },
        Element::E => {
            let cos_ea = (e + ct) / (1.0 + e * ct);
            ThrustAngles {
                alpha: st.atan2(ct + cos_ea),
                beta: 0.0,
            }
        }
        Element::I => ThrustAngles {
            alpha: 0.0,
            beta: sgn(u.cos()) * FRAC_PI_2,
        },
        Element::Raan => {
            if coe.i.sin() < STEERING_INC_MIN {
                return Err(GuidanceError::Singular(element));
            }
            ThrustAngles {
                alpha: 0.0,
                beta: sgn(u.sin()) * FRAC_PI_2,
            }
        }
        Element::Argp => {
            if e < STEERING_ECC_MIN || coe.i.sin() < STEERING_INC_MIN {
                return Err(GuidanceError::Singular(element));
            }
            let k = 1.0 + e * ct;
            let alpha = (-k * ct).atan2((1.0 + k) * st);
            let den = k * alpha.sin() * ct - (1.0 + k) * alpha.cos() * st;
            let num = e * coe.i.tan().recip() * u.sin();
            ThrustAngles {
                alpha,
                beta: (num / den).atan(),
            }
        }
    };
    Ok(angles)
}

/// RIC unit vector (f_R, f_S, f_W) for the given angles.
pub fn angles_to_unit_vector(angles: ThrustAngles) -> Vector3<f64> {
    let (sa, ca) = angles.alpha.sin_cos();
    let (sb, cb) = angles.beta.sin_cos();
    Vector3::new(cb * sa, cb * ca, sb)
}

/// Fraction of the original error still to go: 1 at the start, 0 on target,
/// negative after overshoot. Clamped to ±[`R_MAX`].
pub fn adaptive_ratio(element: Element, current: f64, target: &ElementTarget) -> f64 {
    let r = element.difference(target.target, current) / element.difference(target.target, target.initial);
    r.clamp(-R_MAX, R_MAX)
}

/// Result of blending the per-element directions.
#[derive(Debug, Clone, PartialEq)]
pub struct Blend {
    /// Unit thrust direction, or `None` to coast.
    pub direction: Option<Vector3<f64>>,
    /// The weighted sum before normalization.
    pub raw: Vector3<f64>,
    /// Elements that contributed.
    pub active: Vec<Element>,
    /// Targeted, unconverged elements skipped because their steering law is
    /// singular on this orbit.
    pub dropped: Vec<Element>,
}

fn blend_masked(coe: &ClassicalOrbitalElements, spec: &TargetSpec, active: impl Fn(Element) -> bool) -> Blend {
    let mut raw = Vector3::zeros();
    let mut used = Vec::new();
    let mut dropped = Vec::new();
    for (el, t) in spec.iter() {
        if !active(el) {
            continue;
        }
        match angles_for_element(el, coe) {
            Ok(angles) => {
                let r = adaptive_ratio(el, el.value(coe), t);
                let sign = sgn(el.difference(t.target, t.initial));
                raw += r * t.weight * sign * angles_to_unit_vector(angles);
                used.push(el);
            }
            Err(_) => dropped.push(el),
        }
    }
    let n = raw.norm();
    Blend {
        direction: (n > 1e-9).then(|| raw / n),
        raw,
        active: used,
        dropped,
    }
}

/// Stateless blend: every targeted element outside its tolerance takes part.
pub fn blend(coe: &ClassicalOrbitalElements, spec: &TargetSpec) -> Blend {
    blend_masked(coe, spec, |el| {
        spec.error(el, coe)
            .zip(spec.get(el))
            .is_some_and(|(err, t)| err.abs() > t.tolerance)
    })
}

/// Eccentric-orbit true anomaly of the largest in-plane ω rate, as cos θ.
///
/// With z = 1 + e·cos θ the maximizer solves z³ + e²z − 1 + e² = 0. Writing
/// δ = 1 − z keeps the small-e case well conditioned.
pub(crate) fn argp_rate_cos_anomaly(e: f64) -> f64 {
    let e2 = e * e;
    let mut d = 2.0 * e2 / (3.0 + e2);
    for _ in 0..50 {
        let f = -3.0 * d + 3.0 * d * d - d * d * d + 2.0 * e2 - e2 * d;
        let df = -3.0 + 6.0 * d - 3.0 * d * d - e2;
        let step = f / df;
        d -= step;
        if step.abs() <= 1e-16 * d.abs().max(1e-300) {
            break;
        }
    }
    (-d / e).clamp(-1.0, 1.0)
}

/// Position-dependent maneuver efficiency of `element`, in [0, 1].
pub fn efficiency(element: Element, coe: &ClassicalOrbitalElements) -> Result<f64, GuidanceError> {
    coe.validate()?;
    let ClassicalOrbitalElements { a, e, argp, nu, .. } = *coe;
    let ct = nu.cos();
    let k = 1.0 + e * ct;
    let u = coe.arg_latitude();
    let eta = match element {
        // |V|·√(a(1−e)/(μ(1+e))) with vis-viva; μ cancels
        Element::A => ((2.0 / coe.radius() - 1.0 / a) * a * (1.0 - e) / (1.0 + e)).sqrt(),
        Element::E => (1.0 + 2.0 * e * ct + ct * ct) / (2.0 * k),
        Element::I => {
            let (sw, cw) = argp.sin_cos();
            u.cos().abs() / k * ((1.0 - e * e * sw * sw).sqrt() - e * cw.abs())
        }
        Element::Raan => {
            let (sw, cw) = argp.sin_cos();
            u.sin().abs() / k * ((1.0 - e * e * cw * cw).sqrt() - e * sw.abs())
        }
        Element::Argp => {
            if e < STEERING_ECC_MIN {
                return Err(GuidanceError::Singular(element));
            }
            let cm = argp_rate_cos_anomaly(e);
            let sm2 = 1.0 - cm * cm;
            let st2 = 1.0 - ct * ct;
            (1.0 + st2) / k * (1.0 + e * cm) / (1.0 + sm2)
        }
    };
    Ok(eta.clamp(0.0, 1.0))
}

fn command_from(coe: &ClassicalOrbitalElements, b: Blend, threshold: f64, accel: f64) -> ThrustCommand {
    let Some(dir) = b.direction else {
        return ThrustCommand::coast();
    };
    let etas: Vec<f64> = b.active.iter().filter_map(|&el| efficiency(el, coe).ok()).collect();
    let mean = if etas.is_empty() { 1.0 } else { etas.iter().sum::<f64>() / etas.len() as f64 };
    if mean >= threshold {
        ThrustCommand::fire(dir, accel)
    } else {
        ThrustCommand::coast()
    }
}

/// One stateless DAG evaluation. Fires when the mean efficiency of the
/// unconverged targeted elements is at least `throttle_threshold`.
pub fn dag_command(
    coe: &ClassicalOrbitalElements,
    spec: &TargetSpec,
    throttle_threshold: f64,
    accel: f64,
) -> ThrustCommand {
    command_from(coe, blend(coe, spec), throttle_threshold, accel)
}

/// DAG with converged-element lockout. An element that has reached its
/// tolerance stays out of the blend until its error grows past twice the
/// tolerance.
#[derive(Debug, Clone, Default)]
pub struct DagSession {
    locked: [bool; 5],
    pub throttle_threshold: f64,
}

impl DagSession {
    pub fn new(throttle_threshold: f64) -> Self {
        Self {
            locked: [false; 5],
            throttle_threshold,
        }
    }

    pub fn is_locked(&self, element: Element) -> bool {
        self.locked[element.index()]
    }

    fn update(&mut self, coe: &ClassicalOrbitalElements, spec: &TargetSpec) {
        for (el, t) in spec.iter() {
            let err = el.difference(t.target, el.value(coe)).abs();
            let slot = &mut self.locked[el.index()];
            if err <= t.tolerance {
                *slot = true;
            } else if err > 2.0 * t.tolerance {
                *slot = false;
            }
        }
    }

    /// True when every targeted element is locked out.
    pub fn done(&self, spec: &TargetSpec) -> bool {
        spec.iter().all(|(el, _)| self.locked[el.index()])
    }

    pub fn command(&mut self, coe: &ClassicalOrbitalElements, spec: &TargetSpec, accel: f64) -> ThrustCommand {
        self.update(coe, spec);
        let locked = self.locked;
        let b = blend_masked(coe, spec, |el| !locked[el.index()]);
        command_from(coe, b, self.throttle_threshold, accel)
    }
}
