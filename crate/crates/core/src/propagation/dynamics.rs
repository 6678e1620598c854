use nalgebra::Vector3;

use super::integrator::State6;
use super::{unpack, PerturbationConfig, PropagationError};
use crate::orbital::{ric_basis, GravContext};

pub fn two_body_acceleration(r: &Vector3<f64>, mu: f64) -> Vector3<f64> {
    let rn = r.norm();
    -mu / (rn * rn * rn) * r
}

/// Acceleration from the J2 zonal term in ECI, km/s².
pub fn j2_acceleration(r: &Vector3<f64>, ctx: &GravContext) -> Vector3<f64> {
    let rn2 = r.norm_squared();
    let rn = rn2.sqrt();
    let zr2 = r.z * r.z / rn2;
    let k = -1.5 * ctx.j2 * ctx.mu * ctx.re * ctx.re / (rn2 * rn2 * rn);
    Vector3::new(k * r.x * (1.0 - 5.0 * zr2), k * r.y * (1.0 - 5.0 * zr2), k * r.z * (3.0 - 5.0 * zr2))
}

pub(super) fn cartesian_rhs(t: f64, y: &State6, pert: &PerturbationConfig) -> Result<State6, PropagationError> {
    let r = Vector3::new(y[0], y[1], y[2]);
    let mut acc = two_body_acceleration(&r, pert.ctx.mu);
    if pert.include_j2 {
        acc += j2_acceleration(&r, &pert.ctx);
    }
    if let Some(thrust) = &pert.thrust {
        let state = unpack(y, t);
        let ric = thrust.evaluate(&state)?;
        if ric != Vector3::zeros() {
            acc += ric_basis(&state)?.to_eci(&ric);
        }
    }
    Ok(State6::new(y[3], y[4], y[5], acc.x, acc.y, acc.z))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// J2 acceleration as the gradient of the zonal force function
    /// U = −(μ J2 Re² / r³)·P2(sin φ), by central differences.
    fn j2_by_gradient(r: &Vector3<f64>, ctx: &GravContext) -> Vector3<f64> {
        let pot = |p: &Vector3<f64>| {
            let rn = p.norm();
            let s = p.z / rn;
            -ctx.mu * ctx.j2 * ctx.re * ctx.re / (rn * rn * rn) * 0.5 * (3.0 * s * s - 1.0)
        };
        let h = 1e-3;
        let mut g = Vector3::zeros();
        for k in 0..3 {
            let mut dp = Vector3::zeros();
            dp[k] = h;
            g[k] = (pot(&(r + dp)) - pot(&(r - dp))) / (2.0 * h);
        }
        g
    }

    #[test]
    fn j2_matches_potential_gradient() {
        let ctx = GravContext::default();
        for r in [Vector3::new(7000.0, 100.0, 50.0), Vector3::new(1000.0, -3000.0, 6200.0), Vector3::new(-4000.0, 2000.0, -5000.0)] {
            let a = j2_acceleration(&r, &ctx);
            let g = j2_by_gradient(&r, &ctx);
            assert!((a - g).norm() / a.norm() < 1e-6, "{a} vs {g}");
        }
    }

    #[test]
    fn two_body_points_inward() {
        let r = Vector3::new(7000.0, 0.0, 0.0);
        let a = two_body_acceleration(&r, 398600.4418);
        assert!((a.x + 398600.4418 / 49e6).abs() < 1e-15);
    }
}
