//! Clohessy-Wiltshire two-impulse targeting and Newton differential
//! correction against a nonlinear plant.
//!
//! RIC axes: x radial, y in-track, z cross-track. Hill's equations
//!
//! ```text
//! ẍ = 3n²x + 2nẏ,   ÿ = −2nẋ,   z̈ = −n²z
//! ```

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use super::ManeuverError;
use crate::orbital::RelativeState;

struct Stm {
    rr: Matrix3<f64>,
    rv: Matrix3<f64>,
    vr: Matrix3<f64>,
    vv: Matrix3<f64>,
}

fn stm(n: f64, t: f64) -> Stm {
    let nt = n * t;
    let (s, c) = nt.sin_cos();
    Stm {
        rr: Matrix3::new(4.0 - 3.0 * c, 0.0, 0.0, 6.0 * (s - nt), 1.0, 0.0, 0.0, 0.0, c),
        rv: Matrix3::new(
            s / n,
            2.0 * (1.0 - c) / n,
            0.0,
            -2.0 * (1.0 - c) / n,
            (4.0 * s - 3.0 * nt) / n,
            0.0,
            0.0,
            0.0,
            s / n,
        ),
        vr: Matrix3::new(3.0 * n * s, 0.0, 0.0, -6.0 * n * (1.0 - c), 0.0, 0.0, 0.0, 0.0, -n * s),
        vv: Matrix3::new(c, 2.0 * s, 0.0, -2.0 * s, 4.0 * c - 3.0, 0.0, 0.0, 0.0, c),
    }
}

/// Closed-form CW propagation of a relative state by `t` seconds.
pub fn cw_propagate(rel: &RelativeState, t: f64, n: f64) -> RelativeState {
    let m = stm(n, t);
    RelativeState::new(
        m.rr * rel.position + m.rv * rel.velocity,
        m.vr * rel.position + m.vv * rel.velocity,
    )
}

/// Burns (km/s, RIC) that carry `rel` to rest at `goal` after `tof` seconds.
pub fn cw_two_impulse(
    rel: &RelativeState,
    goal: &Vector3<f64>,
    tof: f64,
    n: f64,
) -> Result<(Vector3<f64>, Vector3<f64>), ManeuverError> {
    if !(tof > 0.0) || !(n > 0.0) || !tof.is_finite() {
        return Err(ManeuverError::InvalidInput(format!("tof {tof} s and n {n} 1/s must be positive")));
    }
    let m = stm(n, tof);
    let nt = n * tof;
    let need = goal - m.rr * rel.position;

    // in-plane: 2×2 block of rv, det = (8 − 8 cos nt − 3 nt sin nt)/n²
    let det_scaled = 8.0 - 8.0 * nt.cos() - 3.0 * nt * nt.sin();
    if det_scaled.abs() < 1e-9 {
        return Err(ManeuverError::SingularTransfer {
            tof,
            reason: "in-plane CW block is singular at this n·tof",
        });
    }
    let block = Matrix2::new(m.rv[(0, 0)], m.rv[(0, 1)], m.rv[(1, 0)], m.rv[(1, 1)]);
    let v_in = block
        .try_inverse()
        .ok_or(ManeuverError::SingularTransfer { tof, reason: "in-plane CW block is singular" })?
        * Vector2::new(need.x, need.y);

    // out-of-plane: z(t) = cos·z0 + sin/n·vz0
    let s = nt.sin();
    let vz = if s.abs() < 1e-9 {
        let scale = goal.z.abs().max(rel.position.z.abs()).max(1e-9);
        if (need.z - m.rv[(2, 2)] * rel.velocity.z).abs() > 1e-9 * scale {
            return Err(ManeuverError::SingularTransfer {
                tof,
                reason: "sin(n·tof) = 0 and the cross-track goal is unreachable",
            });
        }
        rel.velocity.z
    } else {
        need.z / m.rv[(2, 2)]
    };

    let v0 = Vector3::new(v_in.x, v_in.y, vz);
    let vf = m.vr * rel.position + m.vv * v0;
    Ok((v0 - rel.velocity, -vf))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionOptions {
    /// Position tolerance, km.
    pub tol: f64,
    pub max_iter: usize,
    /// Finite-difference step on dv, km/s.
    pub fd_step: f64,
}

impl Default for CorrectionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            max_iter: 10,
            fd_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correction {
    pub dv: Vector3<f64>,
    /// Newton updates applied.
    pub iterations: usize,
    /// Final |position − goal|, km.
    pub residual: f64,
}

/// Newton iteration on a burn `dv` so that `plant(dv)` (the final relative
/// position) reaches `goal`. The Jacobian is rebuilt each iteration by
/// central differences.
pub fn differential_correct<F>(
    dv: Vector3<f64>,
    goal: &Vector3<f64>,
    mut plant: F,
    opts: &CorrectionOptions,
) -> Result<Correction, ManeuverError>
where
    F: FnMut(&Vector3<f64>) -> Result<Vector3<f64>, ManeuverError>,
{
    if !(opts.tol > 0.0 && opts.fd_step > 0.0) {
        return Err(ManeuverError::InvalidInput("tolerance and step must be positive".into()));
    }
    let mut dv = dv;
    let mut err = plant(&dv)? - goal;
    let mut best = (dv, err.norm());
    for it in 0..opts.max_iter {
        if err.norm() <= opts.tol {
            return Ok(Correction { dv, iterations: it, residual: err.norm() });
        }
        let mut jac = Matrix3::zeros();
        for k in 0..3 {
            let mut d = Vector3::zeros();
            d[k] = opts.fd_step;
            let col = (plant(&(dv + d))? - plant(&(dv - d))?) / (2.0 * opts.fd_step);
            jac.set_column(k, &col);
        }
        let Some(inv) = jac.try_inverse() else { break };
        dv -= inv * err;
        err = plant(&dv)? - goal;
        if err.norm() < best.1 {
            best = (dv, err.norm());
        }
    }
    if err.norm() <= opts.tol {
        return Ok(Correction { dv, iterations: opts.max_iter, residual: err.norm() });
    }
    Err(ManeuverError::NotConverged {
        best: best.0,
        residual: best.1,
        iterations: opts.max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbital::{coe_to_cartesian, relative_state_ric, ric_basis, CartesianState, ClassicalOrbitalElements, GravContext};
    use crate::propagation::{propagate_cartesian, IntegratorConfig, PerturbationConfig};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const N: f64 = 0.001_067_4;

    #[test]
    fn at_goal_needs_nothing() {
        let rel = RelativeState::new(Vector3::new(0.0, 0.001, 0.0), Vector3::zeros());
        let (a, b) = cw_two_impulse(&rel, &Vector3::new(0.0, 0.001, 0.0), 3000.0, N).unwrap();
        assert!(a.norm() < 1e-15 && b.norm() < 1e-15);
    }

    #[test]
    fn half_period_in_track_hop() {
        let rel = RelativeState::new(Vector3::new(0.0, -0.2, 0.0), Vector3::zeros());
        let goal = Vector3::new(0.0, 0.001, 0.0);
        let tof = PI / N;
        let (dv1, dv2) = cw_two_impulse(&rel, &goal, tof, N).unwrap();
        let mid = RelativeState::new(rel.position, rel.velocity + dv1);
        let end = cw_propagate(&mid, tof, N);
        assert!((end.position - goal).norm() < 1e-10);
        assert!((end.velocity + dv2).norm() < 1e-12);
    }

    #[test]
    fn singular_phasing_rejected() {
        let rel = RelativeState::new(Vector3::new(0.0, -0.2, 0.0), Vector3::zeros());
        let r = cw_two_impulse(&rel, &Vector3::zeros(), 2.0 * PI / N, N);
        assert!(matches!(r, Err(ManeuverError::SingularTransfer { .. })));
        // cross-track goal at a half period is unreachable
        let r = cw_two_impulse(&rel, &Vector3::new(0.0, 0.0, 0.01), PI / N, N);
        assert!(matches!(r, Err(ManeuverError::SingularTransfer { .. })));
    }

    #[test]
    fn cw_solves_homogeneous_equations() {
        let rel = RelativeState::new(Vector3::new(0.1, -0.3, 0.05), Vector3::new(1e-4, -2e-4, 3e-5));
        let h = 1e-3;
        let at = |t| cw_propagate(&rel, t, N);
        let t = 700.0;
        let acc = (at(t + h).velocity - at(t - h).velocity) / (2.0 * h);
        let s = at(t);
        let expect = Vector3::new(
            3.0 * N * N * s.position.x + 2.0 * N * s.velocity.y,
            -2.0 * N * s.velocity.x,
            -N * N * s.position.z,
        );
        assert!((acc - expect).norm() < 1e-12, "{acc} vs {expect}");
    }

    #[test]
    fn linear_plant_one_iteration() {
        let rel = RelativeState::new(Vector3::new(0.01, -0.2, 0.003), Vector3::zeros());
        let goal = Vector3::new(0.0, 0.001, 0.0);
        let tof = 4000.0;
        let plant = |dv: &Vector3<f64>| {
            Ok(cw_propagate(&RelativeState::new(rel.position, rel.velocity + dv), tof, N).position)
        };
        let c = differential_correct(Vector3::new(1e-4, 0.0, 0.0), &goal, plant, &CorrectionOptions::default()).unwrap();
        assert_eq!(c.iterations, 1);
        let (dv1, _) = cw_two_impulse(&rel, &goal, tof, N).unwrap();
        assert!((c.dv - dv1).norm() < 1e-9);
        // already converged: untouched
        let c2 = differential_correct(dv1, &goal, plant, &CorrectionOptions::default()).unwrap();
        assert_eq!((c2.iterations, c2.dv), (0, dv1));
    }

    #[test]
    fn nonlinear_hop_corrects_quickly() {
        let ctx = GravContext::default();
        let debris = ClassicalOrbitalElements::from_degrees(7046.14, 0.0, 98.3, 140.372, 0.0, 30.0).unwrap();
        let t0 = coe_to_cartesian(&debris, &ctx).unwrap();
        let behind = ClassicalOrbitalElements { nu: debris.nu - 0.2 / debris.a, ..debris };
        let c0 = coe_to_cartesian(&behind, &ctx).unwrap();
        let rel = relative_state_ric(&c0, &t0).unwrap();
        let n = ctx.mean_motion(debris.a);
        let tof = 0.75 * ctx.period(debris.a);
        let goal = Vector3::new(0.0, 0.001, 0.0);
        let (dv1, _) = cw_two_impulse(&rel, &goal, tof, n).unwrap();

        let pert = PerturbationConfig::default();
        let integ = IntegratorConfig::default();
        let t_end = propagate_cartesian(&t0, tof, &pert, &integ).unwrap();
        let basis = ric_basis(&t0).unwrap();
        let plant = |dv: &Vector3<f64>| -> Result<Vector3<f64>, ManeuverError> {
            let c = CartesianState::new(c0.r, c0.v + basis.to_eci(dv), c0.epoch);
            let c_end = propagate_cartesian(&c, tof, &pert, &integ)?;
            Ok(relative_state_ric(&c_end, &t_end)?.position)
        };
        let c = differential_correct(dv1, &goal, plant, &CorrectionOptions::default()).unwrap();
        assert!(c.iterations <= 3, "{}", c.iterations);
        assert!(c.residual <= 1e-4);
    }

    proptest! {
        #[test]
        fn lands_on_goal(x in -1.0..1.0f64, y in -2.0..2.0f64, z in -0.5..0.5f64,
                         gx in -0.1..0.1f64, gy in -0.5..0.5f64, tof in 500.0..5000.0f64) {
            let rel = RelativeState::new(Vector3::new(x, y, z), Vector3::new(1e-4, -1e-4, 0.0));
            let goal = Vector3::new(gx, gy, 0.0);
            let nt: f64 = N * tof;
            prop_assume!((8.0 - 8.0 * nt.cos() - 3.0 * nt * nt.sin()).abs() > 1e-3 && nt.sin().abs() > 1e-3);
            let (dv1, dv2) = cw_two_impulse(&rel, &goal, tof, N).unwrap();
            let end = cw_propagate(&RelativeState::new(rel.position, rel.velocity + dv1), tof, N);
            prop_assert!((end.position - goal).norm() < 1e-10);
            prop_assert!((end.velocity + dv2).norm() < 1e-12);
        }
    }
}
