//! Writes the reference scenario as TOML, reads it back and checks the
//! round trip.
//!
//! cargo run --example scenario_file [-- out.toml]

use chaser::io::{load_scenario, save_scenario, scenario_to_toml};
use chaser::mission::ScenarioConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ScenarioConfig::reference();
    match std::env::args().nth(1) {
        Some(path) => {
            save_scenario(&cfg, &path)?;
            assert_eq!(load_scenario(&path)?, cfg);
            println!("wrote {path}");
        }
        None => print!("{}", scenario_to_toml(&cfg)?),
    }
    Ok(())
}
