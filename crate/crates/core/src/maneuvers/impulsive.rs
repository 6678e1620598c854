use std::f64::consts::PI;

use super::ManeuverError;
use crate::orbital::GravContext;

/// Two-impulse tangential transfer between circular orbits.
/// Burns are signed: negative means retrograde.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HohmannPlan {
    /// km/s
    pub dv1: f64,
    /// km/s
    pub dv2: f64,
    /// s
    pub transfer_time: f64,
}

impl HohmannPlan {
    pub fn total(&self) -> f64 {
        self.dv1.abs() + self.dv2.abs()
    }
}

pub fn hohmann(r1: f64, r2: f64, ctx: &GravContext) -> Result<HohmannPlan, ManeuverError> {
    for r in [r1, r2] {
        if !(r > ctx.re) || !r.is_finite() {
            return Err(ManeuverError::InvalidRadius { radius: r });
        }
    }
    let mu = ctx.mu;
    let at = 0.5 * (r1 + r2);
    let transfer_time = PI * (at.powi(3) / mu).sqrt();
    if r1 == r2 {
        return Ok(HohmannPlan {
            dv1: 0.0,
            dv2: 0.0,
            transfer_time,
        });
    }
    let dv1 = (mu * (2.0 / r1 - 1.0 / at)).sqrt() - (mu / r1).sqrt();
    let dv2 = (mu / r2).sqrt() - (mu * (2.0 / r2 - 1.0 / at)).sqrt();
    Ok(HohmannPlan {
        dv1,
        dv2,
        transfer_time,
    })
}

/// Hohmann descent from circular radius `r` to a circular orbit at
/// `altitude` km.
pub fn deorbit(r: f64, altitude: f64, ctx: &GravContext) -> Result<HohmannPlan, ManeuverError> {
    hohmann(r, ctx.re + altitude, ctx)
}

/// Single-impulse plane rotation at constant speed: 2 v sin(Δi/2).
pub fn plane_change(speed: f64, delta_i: f64) -> Result<f64, ManeuverError> {
    if !(speed > 0.0) || !speed.is_finite() || !delta_i.is_finite() {
        return Err(ManeuverError::InvalidInput(format!("speed {speed}, delta_i {delta_i}")));
    }
    Ok(2.0 * speed * (0.5 * delta_i).sin().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> GravContext {
        GravContext::default()
    }

    #[test]
    fn raise_matches_table() {
        let p = hohmann(6928.14, 7046.14, &ctx()).unwrap();
        assert!((p.dv1 * 1000.0 - 31.957_236).abs() < 1e-5, "{}", p.dv1 * 1000.0);
        assert!((p.dv2 * 1000.0 - 31.822_592).abs() < 1e-5, "{}", p.dv2 * 1000.0);
        assert!((p.dv1 * 1000.0 - 31.9573).abs() < 0.5);
        assert!((p.dv2 * 1000.0 - 31.8226).abs() < 0.5);
    }

    #[test]
    fn deorbit_matches_table() {
        let p = deorbit(7046.14, 250.0, &ctx()).unwrap();
        assert!((p.dv1 * 1000.0 + 115.849_97).abs() < 1e-4, "{}", p.dv1 * 1000.0);
        assert!((p.dv2 * 1000.0 + 117.635_03).abs() < 1e-4, "{}", p.dv2 * 1000.0);
    }

    #[test]
    fn same_radius_is_free() {
        let p = hohmann(7000.0, 7000.0, &ctx()).unwrap();
        assert_eq!((p.dv1, p.dv2), (0.0, 0.0));
        assert!((p.transfer_time - 0.5 * ctx().period(7000.0)).abs() < 1e-9);
    }

    #[test]
    fn rejects_subsurface() {
        assert!(hohmann(6000.0, 7000.0, &ctx()).is_err());
    }

    #[test]
    fn plane_change_examples() {
        assert_eq!(plane_change(7.5, 0.0).unwrap(), 0.0);
        assert!((plane_change(1.0, 60f64.to_radians()).unwrap() - 1.0).abs() < 1e-15);
        let v = ctx().circular_speed(7046.14);
        let dv = plane_change(v, 3.3f64.to_radians()).unwrap() * 1000.0;
        assert!((dv - 433.136).abs() < 0.01, "{dv}");
        assert!((dv - 434.6).abs() < 2.0);
    }

    proptest! {
        #[test]
        fn ascent_descent_symmetric(r1 in 6600.0..40000.0f64, r2 in 6600.0..40000.0f64) {
            let up = hohmann(r1, r2, &ctx()).unwrap();
            let down = hohmann(r2, r1, &ctx()).unwrap();
            prop_assert!((up.total() - down.total()).abs() <= 1e-12 * up.total().max(1e-3));
        }

        #[test]
        fn matches_vis_viva(r1 in 6600.0..40000.0f64, r2 in 6600.0..40000.0f64) {
            let mu = 398600.4418f64;
            let a = (r1 + r2) / 2.0;
            let vp = (2.0 * mu / r1 - mu / a).sqrt();
            let va = (2.0 * mu / r2 - mu / a).sqrt();
            let p = hohmann(r1, r2, &ctx()).unwrap();
            prop_assert!((p.dv1 - (vp - (mu / r1).sqrt())).abs() < 1e-12);
            prop_assert!((p.dv2 - ((mu / r2).sqrt() - va)).abs() < 1e-12);
        }
    }
}
