//! Parses a TLE file and turns each record into initial elements.
//!
//! cargo run --example tle_ingest [-- data/debris_synthetic.tle]

use chaser::io::{parse_tle, tle_to_coe};
use chaser::orbital::{coe_to_cartesian, GravContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/debris_synthetic.tle").into());
    let ctx = GravContext::default();
    for rec in parse_tle(&std::fs::read_to_string(path)?)? {
        let coe = tle_to_coe(&rec, &ctx)?;
        let state = coe_to_cartesian(&coe, &ctx)?;
        println!("{} ({})", rec.name.as_deref().unwrap_or("unnamed"), rec.satnum);
        if let Some(t) = rec.epoch() {
            println!("  epoch   {t}");
        }
        println!("  a       {:.4} km   period {:.3} s (86400/n = {:.3})", coe.a, coe.period(&ctx), 86400.0 / rec.mean_motion);
        println!("  e       {:.7}   i {:.4} deg   raan {:.4} deg", coe.e, rec.inclination_deg, rec.raan_deg);
        println!("  r       {:.3?} km", state.r.as_slice());
        println!("  v       {:.6?} km/s", state.v.as_slice());
    }
    Ok(())
}
