//! Element sets, Kepler's equation and the RIC frame.
//!
//! cargo run --example element_conversions

use chaser::orbital::{
    anomaly_convert, cartesian_to_coe, coe_to_cartesian, relative_state_ric, solve_kepler, AnomalyKind,
    ClassicalOrbitalElements, GravContext,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GravContext::default();
    let chaser = ClassicalOrbitalElements::from_degrees(6928.14, 0.00472, 95.0, 140.372, 216.9, 120.0)?;
    let s = coe_to_cartesian(&chaser, &ctx)?;
    let (back, quality) = cartesian_to_coe(&s, &ctx)?;
    println!("r = {:.6?} km", s.r.as_slice());
    println!("v = {:.9?} km/s", s.v.as_slice());
    println!("round trip a error {:.3e} km, nu error {:.3e} rad, quality {quality:?}", back.a - chaser.a, back.nu - chaser.nu);

    let e_anom = solve_kepler(1.0, 0.5)?;
    println!("Kepler: M = 1, e = 0.5 -> E = {e_anom:.16} (residual {:.1e})", e_anom - 0.5 * e_anom.sin() - 1.0);
    let m = anomaly_convert(chaser.nu, chaser.e, AnomalyKind::True, AnomalyKind::Mean)?;
    println!("chaser mean anomaly {:.6} deg", m.to_degrees());

    // a circular orbit with ω undefined reports ν as the argument of latitude
    let debris = ClassicalOrbitalElements::from_degrees(7046.14, 0.0, 98.3, 140.372, 0.0, 30.0)?;
    let d = coe_to_cartesian(&debris, &ctx)?;
    let ahead = coe_to_cartesian(&ClassicalOrbitalElements { nu: debris.nu + 1.0 / 7046.14, ..debris }, &ctx)?;
    let rel = relative_state_ric(&ahead, &d)?;
    println!("1 km further along the orbit in RIC: {:.6?} km", rel.position.as_slice());
    Ok(())
}
