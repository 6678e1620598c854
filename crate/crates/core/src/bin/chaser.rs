use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chaser::io::{
    format_dv_table, format_proximity_table, format_summary, load_scenario, parse_tle, tle_to_coe,
    write_mission_outputs, IoError,
};
use chaser::maneuvers::{deorbit, hohmann, ManeuverError};
use chaser::mission::{emit_reports, guidance_step, run_mission, GuidanceLaw, MissionError};
use chaser::orbital::GravContext;

#[derive(Parser)]
#[command(name = "chaser", version, about = "Debris chase-and-deorbit mission planner")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Two-burn Hohmann transfer between circular radii (km).
    PlanHohmann {
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
    },
    /// Hohmann descent to a circular orbit at the given altitude (km).
    PlanDeorbit {
        #[arg(long)]
        alt: f64,
        /// Starting circular radius, km.
        #[arg(long, default_value_t = 7046.14)]
        r: f64,
    },
    /// Parse a TLE file and print the records with derived elements.
    ParseTle { file: PathBuf },
    /// Simulate the full mission and write the time series and reports.
    RunMission {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        law: Option<GuidanceLaw>,
        #[arg(long)]
        j2: bool,
    },
    /// Print one steering command at the scenario's initial state.
    GuidanceStep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        law: GuidanceLaw,
    },
}

/// Process exit codes, one per error kind.
#[derive(Debug)]
enum Failure {
    File(String),
    Scenario(String),
    Tle(String),
    Maneuver(String),
    Mission(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::File(_) => 3,
            Failure::Scenario(_) => 4,
            Failure::Tle(_) => 5,
            Failure::Maneuver(_) => 6,
            Failure::Mission(_) => 7,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::File(m) | Failure::Scenario(m) | Failure::Tle(m) | Failure::Maneuver(m) | Failure::Mission(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::File { .. } | IoError::Csv(_) => Failure::File(e.to_string()),
            IoError::Scenario(_) => Failure::Scenario(e.to_string()),
            IoError::Tle(_) => Failure::Tle(e.to_string()),
        }
    }
}

impl From<ManeuverError> for Failure {
    fn from(e: ManeuverError) -> Self {
        Failure::Maneuver(e.to_string())
    }
}

impl From<MissionError> for Failure {
    fn from(e: MissionError) -> Self {
        match e {
            MissionError::InvalidConfig(_) => Failure::Scenario(e.to_string()),
            MissionError::Tle(_) => Failure::Tle(e.to_string()),
            _ => Failure::Mission(e.to_string()),
        }
    }
}

fn print_plan(dv1: f64, dv2: f64, tof: f64) {
    println!("dv1_ms        {:.6}", dv1 * 1000.0);
    println!("dv2_ms        {:.6}", dv2 * 1000.0);
    println!("total_ms      {:.6}", (dv1.abs() + dv2.abs()) * 1000.0);
    println!("transfer_s    {tof:.3}");
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = GravContext::default();
    match cli.cmd {
        Cmd::PlanHohmann { r1, r2 } => {
            let p = hohmann(r1, r2, &ctx)?;
            print_plan(p.dv1, p.dv2, p.transfer_time);
        }
        Cmd::PlanDeorbit { alt, r } => {
            let p = deorbit(r, alt, &ctx)?;
            print_plan(p.dv1, p.dv2, p.transfer_time);
        }
        Cmd::ParseTle { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Failure::File(format!("{}: {e}", file.display())))?;
            let recs = parse_tle(&text).map_err(|e| Failure::Tle(e.to_string()))?;
            for r in recs {
                let coe = tle_to_coe(&r, &ctx).map_err(|e| Failure::Tle(e.to_string()))?;
                println!("name          {}", r.name.as_deref().unwrap_or("-"));
                println!("catalog       {}{}", r.satnum, r.classification);
                let epoch = r.epoch().map_or_else(|| "-".into(), |t| t.format("%Y-%m-%dT%H:%M:%S%.6fZ").to_string());
                println!("epoch         {epoch}");
                println!("i_deg         {}", r.inclination_deg);
                println!("raan_deg      {}", r.raan_deg);
                println!("e             {}", r.eccentricity);
                println!("argp_deg      {}", r.argp_deg);
                println!("m_deg         {}", r.mean_anomaly_deg);
                println!("n_rev_day     {}", r.mean_motion);
                println!("a_km          {:.6}", coe.a);
                println!("nu_deg        {:.6}", coe.nu.to_degrees());
                println!();
            }
        }
        Cmd::RunMission { config, out, law, j2 } => {
            let mut cfg = load_scenario(&config)?;
            if let Some(law) = law {
                cfg.guidance_law = law;
            }
            cfg.perturbations.j2 |= j2;
            let log = run_mission(&cfg)?;
            let files = write_mission_outputs(&log, &out)?;
            let report = emit_reports(&log);
            print!("{}\n{}\n{}", format_dv_table(&report), format_proximity_table(&report), format_summary(&report));
            for f in files {
                println!("wrote         {}", f.display());
            }
        }
        Cmd::GuidanceStep { config, law } => {
            let cfg = load_scenario(&config)?;
            let cmd = guidance_step(&cfg, law)?;
            let d = cmd.direction;
            println!("throttle      {:?}", cmd.throttle);
            println!("direction_ric {:.9} {:.9} {:.9}", d.x, d.y, d.z);
            println!("accel_kms2    {:.6e}", cmd.accel_magnitude);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
