//! Proximity-quotient (Q-law) guidance.
//!
//! ```text
//! Q = (1 + W_p P) Σ W S [(x − x_t) / ẋ_xx]²
//! ```
//!
//! where ẋ_xx is the largest rate of element x reachable anywhere on the
//! current orbit per unit thrust acceleration. The thrust direction is the
//! one minimizing dQ/dt.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{Vector3, Vector5};

use super::dag::{angles_to_unit_vector, argp_rate_cos_anomaly};
use super::{Element, GuidanceError, TargetSpec, ThrustAngles, ThrustCommand};
use crate::orbital::{ClassicalOrbitalElements, GravContext};
use crate::propagation::gve_sensitivity;

/// Blend of in-plane and out-of-plane ω rate maxima.
const ARGP_OOP_WEIGHT: f64 = 0.01;

const GRID_ALPHA: usize = 32;
const GRID_BETA: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QlawParams {
    /// Per-element weights, indexed like [`Element::ALL`].
    pub weights: [f64; 5],
    pub w_p: f64,
    pub k: f64,
    /// Minimum periapsis radius, km.
    pub r_pmin: f64,
    /// Coast when the best dQ/dt is not below −descent_floor (1/s).
    pub descent_floor: f64,
}

impl Default for QlawParams {
    fn default() -> Self {
        Self {
            weights: [1.0; 5],
            w_p: 1.0,
            k: 1.0,
            r_pmin: 6578.137,
            descent_floor: 1e-14,
        }
    }
}

impl QlawParams {
    pub fn weight(&self, el: Element) -> f64 {
        self.weights[el.index()]
    }

    pub fn validate(&self, ctx: &GravContext) -> Result<(), GuidanceError> {
        if self.weights.iter().any(|w| !(*w >= 0.0)) || self.weights.iter().all(|w| *w == 0.0) {
            return Err(GuidanceError::InvalidParams("weights must be non-negative with at least one positive"));
        }
        if !(self.w_p >= 0.0) || !(self.k > 0.0) {
            return Err(GuidanceError::InvalidParams("w_p must be >= 0 and k > 0"));
        }
        if !(self.r_pmin > ctx.re) {
            return Err(GuidanceError::InvalidParams("r_pmin must exceed the body radius"));
        }
        if !(self.descent_floor >= 0.0) {
            return Err(GuidanceError::InvalidParams("descent_floor must be >= 0"));
        }
        Ok(())
    }
}

/// S_a = √(1 + (|a − a_t| / 3a_t)⁴); 1 for the other elements.
pub fn scaling_s(element: Element, coe: &ClassicalOrbitalElements, spec: &TargetSpec) -> f64 {
    match (element, spec.get(Element::A)) {
        (Element::A, Some(t)) => {
            let x = (coe.a - t.target).abs() / (3.0 * t.target);
            (1.0 + x.powi(4)).sqrt()
        }
        _ => 1.0,
    }
}

fn scaling_s_da(coe: &ClassicalOrbitalElements, spec: &TargetSpec) -> f64 {
    let Some(t) = spec.get(Element::A) else { return 0.0 };
    let d = coe.a - t.target;
    let x = d.abs() / (3.0 * t.target);
    let s = (1.0 + x.powi(4)).sqrt();
    2.0 * x.powi(3) * d.signum() / (3.0 * t.target) / s
}

/// P = exp(k (1 − r_p / r_pmin)).
pub fn penalty_p(coe: &ClassicalOrbitalElements, params: &QlawParams) -> f64 {
    (params.k * (1.0 - coe.periapsis_radius() / params.r_pmin)).exp()
}

/// Largest |d(element)/dt| over thrust direction and position on the current
/// orbit, per unit acceleration (km/s²).
pub fn max_rate(element: Element, coe: &ClassicalOrbitalElements, ctx: &GravContext) -> Result<f64, GuidanceError> {
    let ClassicalOrbitalElements { a, e, i, argp, .. } = *coe;
    let p = coe.semi_latus_rectum();
    let h = (ctx.mu * p).sqrt();
    let (sw, cw) = argp.sin_cos();
    let raan_rate = || p / (h * i.sin() * ((1.0 - e * e * cw * cw).sqrt() - e * sw.abs()));
    let m = match element {
        Element::A => 2.0 * a * (a * (1.0 + e) / (ctx.mu * (1.0 - e))).sqrt(),
        Element::E => 2.0 * p / h,
        Element::I => p / (h * ((1.0 - e * e * sw * sw).sqrt() - e * cw.abs())),
        Element::Raan => raan_rate(),
        Element::Argp => {
            let ct = argp_rate_cos_anomaly(e);
            let st2 = 1.0 - ct * ct;
            let r = p / (1.0 + e * ct);
            let inplane = (p * p * ct * ct + (p + r) * (p + r) * st2).sqrt() / (e * h);
            let oop = (raan_rate() * i.cos()).abs();
            (inplane + ARGP_OOP_WEIGHT * oop) / (1.0 + ARGP_OOP_WEIGHT)
        }
    };
    if !(m > 0.0 && m.is_finite()) {
        return Err(GuidanceError::Singular(element));
    }
    Ok(m)
}

/// Error outside the deadband, zero inside.
fn dead_error(el: Element, coe: &ClassicalOrbitalElements, spec: &TargetSpec) -> f64 {
    match spec.get(el) {
        Some(t) => {
            let d = el.difference(el.value(coe), t.target);
            if d.abs() <= t.tolerance {
                0.0
            } else {
                d
            }
        }
        None => 0.0,
    }
}

fn with_element(coe: &ClassicalOrbitalElements, el: Element, v: f64) -> ClassicalOrbitalElements {
    let mut c = *coe;
    match el {
        Element::A => c.a = v,
        Element::E => c.e = v,
        Element::I => c.i = v,
        Element::Raan => c.raan = v,
        Element::Argp => c.argp = v,
    }
    c
}

pub fn q_value(
    coe: &ClassicalOrbitalElements,
    spec: &TargetSpec,
    params: &QlawParams,
    ctx: &GravContext,
) -> Result<f64, GuidanceError> {
    spec.validate()?;
    let mut sum = 0.0;
    for (el, _) in spec.iter() {
        let d = dead_error(el, coe, spec);
        if d == 0.0 {
            continue;
        }
        let m = max_rate(el, coe, ctx)?;
        sum += params.weight(el) * scaling_s(el, coe, spec) * (d / m).powi(2);
    }
    Ok((1.0 + params.w_p * penalty_p(coe, params)) * sum)
}

/// ∂Q/∂(a, e, i, Ω, ω). Error and scaling terms are differentiated
/// analytically; the max-rate dependence by central differences.
fn q_gradient(
    coe: &ClassicalOrbitalElements,
    spec: &TargetSpec,
    params: &QlawParams,
    ctx: &GravContext,
) -> Result<Vector5<f64>, GuidanceError> {
    let pen = 1.0 + params.w_p * penalty_p(coe, params);
    let p_val = penalty_p(coe, params);
    let dpen = Vector5::new(
        -params.w_p * params.k * (1.0 - coe.e) / params.r_pmin * p_val,
        params.w_p * params.k * coe.a / params.r_pmin * p_val,
        0.0,
        0.0,
        0.0,
    );

    let mut sum = 0.0;
    let mut dsum = Vector5::zeros();
    for (el, _) in spec.iter() {
        let d = dead_error(el, coe, spec);
        if d == 0.0 {
            continue;
        }
        let w = params.weight(el);
        let s = scaling_s(el, coe, spec);
        let m = max_rate(el, coe, ctx)?;
        sum += w * s * (d / m).powi(2);

        // direct error term
        dsum[el.index()] += w * s * 2.0 * d / (m * m);
        if el == Element::A {
            dsum[0] += w * scaling_s_da(coe, spec) * (d / m).powi(2);
        }
        // max-rate dependence on each slow element
        for dep in Element::ALL {
            let x = dep.value(coe);
            let h = match dep {
                Element::A => 1e-6 * x,
                Element::E => 1e-7,
                _ => 1e-7,
            };
            let (lo, hi) = if dep == Element::E && x - h < 0.0 { (x, x + h) } else { (x - h, x + h) };
            let m_hi = max_rate(el, &with_element(coe, dep, hi), ctx);
            let m_lo = max_rate(el, &with_element(coe, dep, lo), ctx);
            if let (Ok(m_hi), Ok(m_lo)) = (m_hi, m_lo) {
                let dm = (m_hi - m_lo) / (hi - lo);
                dsum[dep.index()] += -2.0 * w * s * d * d / (m * m * m) * dm;
            }
        }
    }
    Ok(dpen * sum + dsum * pen)
}

/// Coefficients c with dQ/dt = accel·(c · f) for RIC unit direction f.
fn qdot_coefficients(
    coe: &ClassicalOrbitalElements,
    spec: &TargetSpec,
    params: &QlawParams,
    ctx: &GravContext,
) -> Result<Vector3<f64>, GuidanceError> {
    let grad = q_gradient(coe, spec, params, ctx)?;
    let b = gve_sensitivity(coe, ctx);
    let mut c = Vector3::zeros();
    for j in 0..5 {
        c += grad[j] * b.row(j).transpose();
    }
    Ok(c)
}

/// dQ/dt for thrust of magnitude `accel` along the RIC unit `direction`.
pub fn qdot(
    coe: &ClassicalOrbitalElements,
    spec: &TargetSpec,
    params: &QlawParams,
    direction: &Vector3<f64>,
    accel: f64,
    ctx: &GravContext,
) -> Result<f64, GuidanceError> {
    Ok(accel * qdot_coefficients(coe, spec, params, ctx)?.dot(direction))
}

fn unit(alpha: f64, beta: f64) -> Vector3<f64> {
    angles_to_unit_vector(ThrustAngles { alpha, beta })
}

/// Nelder-Mead on (α, β) starting from `x0`.
fn nelder_mead(f: impl Fn([f64; 2]) -> f64, x0: [f64; 2], step: [f64; 2], tol: f64) -> [f64; 2] {
    let mut s = [x0, [x0[0] + step[0], x0[1]], [x0[0], x0[1] + step[1]]];
    let mut fs = s.map(&f);
    for _ in 0..2000 {
        // order: best first
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| fs[i].total_cmp(&fs[j]).then(i.cmp(&j)));
        s = idx.map(|k| s[k]);
        fs = idx.map(|k| fs[k]);
        let size = (1..3)
            .map(|k| (s[k][0] - s[0][0]).abs().max((s[k][1] - s[0][1]).abs()))
            .fold(0.0, f64::max);
        if size <= tol {
            break;
        }
        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let lerp = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let xr = lerp(-1.0);
        let fr = f(xr);
        if fr < fs[0] {
            let xe = lerp(-2.0);
            let fe = f(xe);
            if fe < fr {
                s[2] = xe;
                fs[2] = fe;
            } else {
                s[2] = xr;
                fs[2] = fr;
            }
        } else if fr < fs[1] {
            s[2] = xr;
            fs[2] = fr;
        } else {
            let xc = if fr < fs[2] { lerp(-0.5) } else { lerp(0.5) };
            let fc = f(xc);
            if fc < fs[2].min(fr) {
                s[2] = xc;
                fs[2] = fc;
            } else {
                for k in 1..3 {
                    s[k] = [(s[0][0] + s[k][0]) / 2.0, (s[0][1] + s[k][1]) / 2.0];
                    fs[k] = f(s[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| fs[i].total_cmp(&fs[j]).then(i.cmp(&j))).unwrap_or(0);
    s[best]
}

/// Thrust direction minimizing dQ/dt: a 32×16 (α×β) grid seeds a
/// Nelder-Mead refinement. Coasts once the targets are met or no direction
/// decreases Q faster than the descent floor.
pub fn best_direction(
    coe: &ClassicalOrbitalElements,
    spec: &TargetSpec,
    params: &QlawParams,
    accel: f64,
    ctx: &GravContext,
) -> Result<ThrustCommand, GuidanceError> {
    params.validate(ctx)?;
    if q_value(coe, spec, params, ctx)? <= 0.0 {
        return Ok(ThrustCommand::coast());
    }
    let c = qdot_coefficients(coe, spec, params, ctx)?;
    let phi = |x: [f64; 2]| c.dot(&unit(x[0], x[1]));

    let mut seed = [0.0, 0.0];
    let mut best = f64::INFINITY;
    for ia in 0..GRID_ALPHA {
        let alpha = -PI + TAU * ia as f64 / GRID_ALPHA as f64;
        for ib in 0..GRID_BETA {
            let beta = -FRAC_PI_2 + PI * (ib as f64 + 0.5) / GRID_BETA as f64;
            let v = phi([alpha, beta]);
            if v < best {
                best = v;
                seed = [alpha, beta];
            }
        }
    }
    let step = [TAU / GRID_ALPHA as f64 / 2.0, PI / GRID_BETA as f64 / 2.0];
    // restarting from the last best point fixes simplex collapse
    let mut x = seed;
    let mut fx = phi(x);
    for _ in 0..8 {
        let y = nelder_mead(phi, x, step, 1e-10);
        let fy = phi(y);
        let moved = (y[0] - x[0]).abs().max((y[1] - x[1]).abs());
        if fy <= fx {
            x = y;
            fx = fy;
        }
        if moved <= 1e-10 {
            break;
        }
    }
    let dir = unit(x[0], x[1]);
    let rate = accel * c.dot(&dir);
    if rate >= -params.descent_floor {
        return Ok(ThrustCommand::coast());
    }
    Ok(ThrustCommand::fire(dir, accel))
}
