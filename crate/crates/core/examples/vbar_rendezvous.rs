//! Two-impulse Clohessy-Wiltshire hop from 1 km behind the debris to 1 m
//! ahead, refined by differential correction on the full dynamics.
//!
//! cargo run --release --example vbar_rendezvous

use nalgebra::Vector3;

use chaser::maneuvers::{cw_propagate, cw_two_impulse, differential_correct, CorrectionOptions, ManeuverError};
use chaser::orbital::{coe_to_cartesian, relative_state_ric, ric_basis, ClassicalOrbitalElements, GravContext};
use chaser::propagation::{propagate_cartesian, IntegratorConfig, PerturbationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GravContext::default();
    let debris_coe = ClassicalOrbitalElements::from_degrees(7046.14, 0.0, 98.3, 140.372, 0.0, 0.0)?;
    let debris = coe_to_cartesian(&debris_coe, &ctx)?;
    let chaser = coe_to_cartesian(&ClassicalOrbitalElements { nu: -1.0 / 7046.14, ..debris_coe }, &ctx)?;

    let n = ctx.mean_motion(debris_coe.a);
    let tof = 0.75 * debris_coe.period(&ctx);
    let goal = Vector3::new(0.0, 0.001, 0.0);
    let rel = relative_state_ric(&chaser, &debris)?;
    let (dv0, dv1) = cw_two_impulse(&rel, &goal, tof, n)?;
    let mut after = rel;
    after.velocity += dv0;
    println!("start RIC {:.6?} km", rel.position.as_slice());
    println!("CW burns {:.4?} / {:.4?} m/s", (dv0 * 1000.0).as_slice(), (dv1 * 1000.0).as_slice());
    println!("CW predicted miss {:.3e} km", (cw_propagate(&after, tof, n).position - goal).norm());

    let pert = PerturbationConfig::two_body().with_j2(true);
    let integ = IntegratorConfig::default();
    let basis = ric_basis(&debris)?;
    let debris_end = propagate_cartesian(&debris, tof, &pert, &integ)?;
    let plant = |dv: &Vector3<f64>| -> Result<Vector3<f64>, ManeuverError> {
        let mut c = chaser;
        c.v += basis.to_eci(dv);
        let end = propagate_cartesian(&c, tof, &pert, &integ)?;
        Ok(relative_state_ric(&end, &debris_end)?.position)
    };
    let uncorrected = plant(&dv0)?;
    println!("CW burn flown with J2 arrives at {:.6?} km", uncorrected.as_slice());
    let opts = CorrectionOptions {
        tol: 1e-6,
        ..CorrectionOptions::default()
    };
    let c = differential_correct(dv0, &goal, plant, &opts)?;
    println!(
        "corrected burn {:.4?} m/s after {} iterations, miss {:.2e} km",
        (c.dv * 1000.0).as_slice(),
        c.iterations,
        c.residual
    );
    Ok(())
}
