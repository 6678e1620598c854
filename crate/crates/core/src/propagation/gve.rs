//! Gauss variational equations in the RSW (= RIC) frame.
//!
//! With p = a(1−e²), h = √(μp), r = p/(1+e cos ν), u = ω + ν:
//!
//! ```text
//! da/dt = (2a²/h) (e sin ν f_R + (p/r) f_S)
//! de/dt = (1/h) (p sin ν f_R + ((p+r) cos ν + r e) f_S)
//! di/dt = (r cos u / h) f_W
//! dΩ/dt = (r sin u / (h sin i)) f_W
//! dω/dt = (1/(h e)) (−p cos ν f_R + (p+r) sin ν f_S) − cos i dΩ/dt
//! dν/dt = h/r² − (1/(h e)) (−p cos ν f_R + (p+r) sin ν f_S)
//! ```
//!
//! Below the singular eccentricity the 1/e terms are dropped (ω frozen, ν
//! carries the argument of latitude); below the singular inclination the
//! 1/sin i terms are dropped (Ω frozen).

use std::f64::consts::PI;

use nalgebra::{Matrix6x3, Vector3, Vector6};

use super::integrator::{integrate, State6};
use super::{check_duration, IntegratorConfig, PerturbationConfig, PropagationError, REENTRY_ALTITUDE_KM};
use crate::orbital::{
    coe_to_cartesian, ric_basis, wrap_two_pi, ClassicalOrbitalElements, GravContext, OrbitalError, ECC_SINGULAR,
    INC_SINGULAR,
};

/// Element rates per unit RIC acceleration. Rows: a, e, i, Ω, ω, ν.
/// The Keplerian h/r² drift of ν is not included.
pub fn gve_sensitivity(coe: &ClassicalOrbitalElements, ctx: &GravContext) -> Matrix6x3<f64> {
    let ClassicalOrbitalElements { a, e, i, argp, nu, .. } = *coe;
    let p = a * (1.0 - e * e);
    let h = (ctx.mu * p).sqrt();
    let (snu, cnu) = nu.sin_cos();
    let r = p / (1.0 + e * cnu);
    let u = argp + nu;
    let (su, cu) = u.sin_cos();
    let (si, ci) = i.sin_cos();

    let mut m = Matrix6x3::zeros();
    m[(0, 0)] = 2.0 * a * a / h * e * snu;
    m[(0, 1)] = 2.0 * a * a / h * p / r;
    m[(1, 0)] = p * snu / h;
    m[(1, 1)] = ((p + r) * cnu + r * e) / h;
    m[(2, 2)] = r * cu / h;

    let equatorial = si.abs() < INC_SINGULAR;
    let raan_w = if equatorial { 0.0 } else { r * su / (h * si) };
    m[(3, 2)] = raan_w;

    if e < ECC_SINGULAR {
        // ω frozen at zero; ν is the argument of latitude
        m[(5, 2)] = -ci * raan_w;
    } else {
        let w_r = -p * cnu / (h * e);
        let w_s = (p + r) * snu / (h * e);
        m[(4, 0)] = w_r;
        m[(4, 1)] = w_s;
        m[(4, 2)] = -ci * raan_w;
        m[(5, 0)] = -w_r;
        m[(5, 1)] = -w_s;
    }
    m
}

/// Full element rates under the RIC acceleration `accel` (km/s²).
pub fn gve_rates(coe: &ClassicalOrbitalElements, accel: &Vector3<f64>, ctx: &GravContext) -> Vector6<f64> {
    let p = coe.semi_latus_rectum();
    let h = (ctx.mu * p).sqrt();
    let r = coe.radius();
    let mut rates = gve_sensitivity(coe, ctx) * accel;
    rates[5] += h / (r * r);
    rates
}

fn to_coe(y: &State6) -> Result<ClassicalOrbitalElements, OrbitalError> {
    let (mut e, mut argp, mut nu) = (y[1], y[4], y[5]);
    if e < 0.0 {
        e = -e;
        argp += PI;
        nu += PI;
    }
    let coe = ClassicalOrbitalElements {
        a: y[0],
        e,
        i: y[2].clamp(0.0, PI),
        raan: wrap_two_pi(y[3]),
        argp: wrap_two_pi(argp),
        nu: wrap_two_pi(nu),
    };
    coe.validate()?;
    Ok(coe)
}

fn gve_rhs(t: f64, y: &State6, pert: &PerturbationConfig) -> Result<State6, PropagationError> {
    let coe = to_coe(y)?;
    let mut accel = Vector3::zeros();
    if pert.include_j2 || pert.thrust.is_some() {
        let state = coe_to_cartesian(&coe, &pert.ctx)?.with_epoch(t);
        if pert.include_j2 {
            let basis = ric_basis(&state)?;
            accel += basis.to_ric(&super::j2_acceleration(&state.r, &pert.ctx));
        }
        if let Some(thrust) = &pert.thrust {
            accel += thrust.evaluate(&state)?;
        }
    }
    let mut rates = gve_rates(&coe, &accel, &pert.ctx);
    // a stored negative e is the same orbit with ω, ν shifted by π
    if y[1] < 0.0 {
        rates[1] = -rates[1];
    }
    Ok(rates)
}

fn pack(coe: &ClassicalOrbitalElements) -> State6 {
    State6::new(coe.a, coe.e, coe.i, coe.raan, coe.argp, coe.nu)
}

fn run(
    coe: &ClassicalOrbitalElements,
    duration: f64,
    pert: &PerturbationConfig,
    integ: &IntegratorConfig,
    on_step: &mut dyn FnMut(f64, &State6),
) -> Result<ClassicalOrbitalElements, PropagationError> {
    check_duration(duration)?;
    integ.validate()?;
    coe.validate()?;
    if duration == 0.0 {
        return Ok(*coe);
    }
    let ctx = pert.ctx;
    let guard = move |t: f64, y: &State6| {
        let c = to_coe(y)?;
        let alt = c.radius() - ctx.re;
        if alt < REENTRY_ALTITUDE_KM {
            return Err(PropagationError::ReEntry { epoch: t, altitude: alt });
        }
        Ok(())
    };
    let mut rhs = |t: f64, y: &State6| gve_rhs(t, y, pert);
    let out = integrate(&mut rhs, 0.0, pack(coe), duration, integ, &[], &guard, on_step)?;
    Ok(to_coe(&out.y)?)
}

/// Propagates osculating elements for `duration` seconds.
pub fn propagate_gve(
    coe: &ClassicalOrbitalElements,
    duration: f64,
    pert: &PerturbationConfig,
    integ: &IntegratorConfig,
) -> Result<ClassicalOrbitalElements, PropagationError> {
    run(coe, duration, pert, integ, &mut |_, _| {})
}

/// As [`propagate_gve`], returning `(t, elements)` at every accepted step.
pub fn propagate_gve_dense(
    coe: &ClassicalOrbitalElements,
    duration: f64,
    pert: &PerturbationConfig,
    integ: &IntegratorConfig,
) -> Result<Vec<(f64, ClassicalOrbitalElements)>, PropagationError> {
    let mut out = vec![(0.0, *coe)];
    let mut err = None;
    run(coe, duration, pert, integ, &mut |t, y| match to_coe(y) {
        Ok(c) => out.push((t, c)),
        Err(e) => err = Some(e),
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbital::{anomaly_convert, AnomalyKind};
    use crate::propagation::ThrustProfile;

    fn ctx() -> GravContext {
        GravContext::default()
    }

    #[test]
    fn keplerian_invariance() {
        let coe = ClassicalOrbitalElements::from_degrees(7046.14, 0.01, 98.3, 140.0, 30.0, 10.0).unwrap();
        let pert = PerturbationConfig::default();
        let t = ctx().period(coe.a);
        let out = propagate_gve(&coe, t, &pert, &IntegratorConfig::default()).unwrap();
        for (x, y) in [(out.a, coe.a), (out.e, coe.e), (out.i, coe.i), (out.raan, coe.raan), (out.argp, coe.argp)] {
            assert!((x - y).abs() / y.abs() <= 1e-10, "{x} vs {y}");
        }
        let d = (out.nu - coe.nu).abs();
        assert!(d.min(std::f64::consts::TAU - d) < 1e-8);
    }

    #[test]
    fn true_anomaly_advances_per_kepler() {
        let coe = ClassicalOrbitalElements::from_degrees(7046.14, 0.05, 45.0, 0.0, 0.0, 0.0).unwrap();
        let dt = 1234.5;
        let out = propagate_gve(&coe, dt, &PerturbationConfig::default(), &IntegratorConfig::default()).unwrap();
        let m = ctx().mean_motion(coe.a) * dt;
        let nu = anomaly_convert(m, coe.e, AnomalyKind::Mean, AnomalyKind::True).unwrap();
        assert!((out.nu - nu).abs() < 1e-9, "{} vs {}", out.nu, nu);
    }

    #[test]
    fn cross_track_at_ninety_degrees_leaves_inclination() {
        // ω + ν = 90°
        let coe = ClassicalOrbitalElements::from_degrees(7000.0, 0.01, 50.0, 10.0, 30.0, 60.0).unwrap();
        let rates = gve_rates(&coe, &Vector3::new(0.0, 0.0, 1e-6), &ctx());
        assert!(rates[2].abs() < 1e-20, "{}", rates[2]);
        assert!(rates[3].abs() > 0.0);
    }

    #[test]
    fn circular_policy_keeps_argp_fixed() {
        let coe = ClassicalOrbitalElements::from_degrees(7000.0, 0.0, 50.0, 10.0, 0.0, 60.0).unwrap();
        let m = gve_sensitivity(&coe, &ctx());
        assert_eq!(m.row(4).norm(), 0.0);
    }

    #[test]
    fn thrust_changes_sma_like_cartesian() {
        let coe = ClassicalOrbitalElements::from_degrees(7000.0, 0.001, 30.0, 0.0, 0.0, 0.0).unwrap();
        let pert = PerturbationConfig::default().with_thrust(ThrustProfile::constant_ric(Vector3::new(0.0, 1e-7, 0.0)));
        let out = propagate_gve(&coe, 1000.0, &pert, &IntegratorConfig::default()).unwrap();
        assert!(out.a > coe.a);
    }
}
