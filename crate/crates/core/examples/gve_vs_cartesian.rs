//! The same thrusting orbit flown on Cartesian dynamics and on the Gauss
//! variational equations.
//!
//! cargo run --release --example gve_vs_cartesian

use nalgebra::Vector3;

use chaser::orbital::{cartesian_to_coe, coe_to_cartesian, ClassicalOrbitalElements, GravContext};
use chaser::propagation::{propagate_cartesian, propagate_gve, IntegratorConfig, PerturbationConfig, ThrustProfile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GravContext::default();
    let coe = ClassicalOrbitalElements::from_degrees(7000.0, 0.01, 50.0, 30.0, 40.0, 10.0)?;
    let thrust = ThrustProfile::constant_ric(Vector3::new(2e-7, 5e-7, 3e-7));
    let pert = PerturbationConfig::two_body().with_thrust(thrust);
    let integ = IntegratorConfig::default();
    let t = coe.period(&ctx);

    let cart = propagate_cartesian(&coe_to_cartesian(&coe, &ctx)?, t, &pert, &integ)?;
    let (c, _) = cartesian_to_coe(&cart, &ctx)?;
    let g = propagate_gve(&coe, t, &pert, &integ)?;
    for (name, a, b) in [
        ("a", c.a, g.a),
        ("e", c.e, g.e),
        ("i", c.i, g.i),
        ("raan", c.raan, g.raan),
        ("argp", c.argp, g.argp),
    ] {
        println!("{name:<5} cartesian {a:>20.12}  gve {b:>20.12}  rel diff {:.2e}", ((a - b) / a).abs());
    }
    Ok(())
}
