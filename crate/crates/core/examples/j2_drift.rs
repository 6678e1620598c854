//! Secular node regression under J2 compared with the first-order formula.
//!
//! cargo run --release --example j2_drift

use chaser::orbital::{cartesian_to_coe, coe_to_cartesian, wrap_pi, ClassicalOrbitalElements, GravContext};
use chaser::propagation::{propagate_cartesian, IntegratorConfig, PerturbationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GravContext::default();
    let coe = ClassicalOrbitalElements::from_degrees(7046.14, 0.0, 98.3, 140.372, 0.0, 0.0)?;
    let s0 = coe_to_cartesian(&coe, &ctx)?;
    let pert = PerturbationConfig::two_body().with_j2(true);
    let integ = IntegratorConfig::default();

    let n = ctx.mean_motion(coe.a);
    let p = coe.semi_latus_rectum();
    let rate = -1.5 * n * ctx.j2 * (ctx.re / p).powi(2) * coe.i.cos();
    println!("first-order RAAN rate {:.4} deg/day", rate.to_degrees() * 86400.0);

    let days = 2.0;
    let s1 = propagate_cartesian(&s0, days * 86400.0, &pert, &integ)?;
    let (c1, _) = cartesian_to_coe(&s1, &ctx)?;
    let drift = wrap_pi(c1.raan - coe.raan).to_degrees() / days;
    println!("propagated (osculating) {drift:.4} deg/day over {days} days");
    println!("a {:.3} km -> {:.3} km (short-period only)", coe.a, c1.a);
    Ok(())
}
