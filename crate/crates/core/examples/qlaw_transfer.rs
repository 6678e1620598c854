//! Q-law transfer onto the debris orbit, printing Q once per orbit.
//!
//! cargo run --release --example qlaw_transfer

use chaser::guidance::{fly_transfer, q_value, Element, QlawParams, SteeringLaw, TargetSpec, TransferOptions};
use chaser::orbital::{ClassicalOrbitalElements, GravContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GravContext::default();
    let c0 = ClassicalOrbitalElements::from_degrees(6928.14, 0.00472, 95.0, 140.372, 216.9, 120.0)?;
    let spec = TargetSpec::new()
        .with(Element::A, 7046.14, c0.a, 1.0)?
        .with(Element::I, 98.3f64.to_radians(), c0.i, 0.01f64.to_radians())?;
    let params = QlawParams::default();
    // thrust of the reference spacecraft at its wet mass
    let opts = TransferOptions {
        accel: 0.4 / 24.0 / 1000.0,
        hold: 10.0,
        ..TransferOptions::default()
    };
    let r = fly_transfer(&c0, &spec, &mut SteeringLaw::Qlaw(params), &opts, &ctx)?;
    let f = r.final_elements();
    println!("converged {} after {:.2} h, dv {:.2} m/s", r.converged, r.elapsed / 3600.0, r.dv * 1000.0);
    println!("a {:.4} km, i {:.5} deg", f.a, f.i.to_degrees());
    let per_orbit = (c0.period(&ctx) / opts.hold).round() as usize;
    for (t, c) in r.samples.iter().step_by(per_orbit) {
        println!("  t {:>7.0} s   Q {:.6e}", t, q_value(c, &spec, &params, &ctx)?);
    }
    Ok(())
}
