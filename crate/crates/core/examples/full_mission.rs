//! Runs the reference debris-removal mission and prints its tables.
//!
//! cargo run --release --example full_mission [-- scenario.toml [out_dir]]

use chaser::io::{format_dv_table, format_proximity_table, format_summary, load_scenario, write_mission_outputs};
use chaser::mission::{emit_reports, run_mission, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => load_scenario(path)?,
        None => ScenarioConfig::reference(),
    };
    let log = run_mission(&cfg)?;
    if let Some(dir) = std::env::args().nth(2) {
        for f in write_mission_outputs(&log, dir)? {
            println!("wrote {}", f.display());
        }
    }
    let report = emit_reports(&log);
    print!("{}", format_dv_table(&report));
    println!();
    print!("{}", format_proximity_table(&report));
    println!();
    print!("{}", format_summary(&report));
    println!("rows logged: {}", log.rows.len());
    for (phase, t) in &log.phase_starts {
        println!("  {phase:<13} from {t:>10.1} s");
    }
    Ok(())
}
