//! Directional Adaptive Guidance raising a and rotating i onto the debris
//! orbit at 1e-7 km/s².
//!
//! cargo run --release --example dag_transfer

use chaser::guidance::{fly_transfer, DagSession, Element, SteeringLaw, TargetSpec, TransferOptions};
use chaser::orbital::{ClassicalOrbitalElements, GravContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GravContext::default();
    let c0 = ClassicalOrbitalElements::from_degrees(6928.14, 0.00472, 95.0, 140.372, 216.9, 120.0)?;
    let spec = TargetSpec::new()
        .with(Element::A, 7046.14, c0.a, 1.0)?
        .with(Element::I, 98.3f64.to_radians(), c0.i, 0.01f64.to_radians())?;
    let opts = TransferOptions::default();
    let mut law = SteeringLaw::Dag(DagSession::new(0.0));
    let r = fly_transfer(&c0, &spec, &mut law, &opts, &ctx)?;
    let f = r.final_elements();
    println!("converged {} after {:.2} days, dv {:.2} m/s", r.converged, r.elapsed / 86400.0, r.dv * 1000.0);
    println!("a {:.4} km, e {:.6}, i {:.5} deg", f.a, f.e, f.i.to_degrees());
    let step = (r.samples.len() / 10).max(1);
    for (t, c) in r.samples.iter().step_by(step) {
        println!("  t {:>8.2} d   a {:>10.4}   i {:>9.5}", t / 86400.0, c.a, c.i.to_degrees());
    }
    Ok(())
}
