//! Books the reference delta-v budget against the spacecraft's propellant
//! and total-impulse limits for a range of masses.
//!
//! cargo run --example propellant_budget

use chaser::maneuvers::{PropulsionLedger, SpacecraftConfig};

fn main() {
    let budget_ms = [31.9573, 31.8226, 434.626, 82.7, 52.7, 115.849, 117.634];
    for wet in [3.0, 5.0, 24.0, 124.0] {
        let cfg = SpacecraftConfig {
            dry_mass: 0.5 * wet,
            propellant_mass: 0.5 * wet,
            ..SpacecraftConfig::default()
        };
        let mut ledger = PropulsionLedger::new(cfg);
        for (k, dv) in budget_ms.iter().enumerate() {
            ledger.burn(&format!("dv{}", k + 1), dv / 1000.0);
        }
        println!(
            "wet {wet:>6.1} kg: impulse used {:>9.1} of {:.0} N s, propellant left {:>8.3} kg",
            cfg.total_impulse_budget - ledger.impulse_remaining,
            cfg.total_impulse_budget,
            ledger.propellant_remaining
        );
        for f in &ledger.flags {
            println!("    {f}");
        }
    }
}
