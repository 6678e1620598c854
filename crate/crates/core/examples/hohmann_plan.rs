//! Impulsive planning for the reference mission: orbit raise, plane change
//! and de-orbit, booked against the default 24 kg spacecraft.
//!
//! cargo run --example hohmann_plan

use chaser::maneuvers::{deorbit, hohmann, plane_change, PropulsionLedger, SpacecraftConfig};
use chaser::orbital::GravContext;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GravContext::default();
    let raise = hohmann(6928.14, 7046.14, &ctx)?;
    let pc = plane_change(ctx.circular_speed(7046.14), 3.3f64.to_radians())?;
    let down = deorbit(7046.14, 250.0, &ctx)?;

    let mut ledger = PropulsionLedger::new(SpacecraftConfig::default());
    println!("{:<14} {:>12} {:>10} {:>10}", "burn", "dv_ms", "prop_kg", "burn_s");
    for (label, dv) in [
        ("dv1_raise", raise.dv1),
        ("dv2_raise", raise.dv2),
        ("plane_change", pc),
        ("dv1_deorbit", down.dv1),
        ("dv2_deorbit", down.dv2),
    ] {
        let cost = ledger.burn(label, dv);
        println!("{label:<14} {:>12.4} {:>10.5} {:>10.1}", dv * 1000.0, cost.propellant, cost.duration);
    }
    println!("raise transfer {:.1} s, de-orbit transfer {:.1} s", raise.transfer_time, down.transfer_time);
    println!("total {:.4} m/s, mass left {:.4} kg", ledger.total_dv * 1000.0, ledger.mass);
    for f in &ledger.flags {
        println!("flag: {f}");
    }
    Ok(())
}
