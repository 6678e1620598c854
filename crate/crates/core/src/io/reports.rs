use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{write_timeseries_csv, IoError};
use crate::mission::{emit_reports, MissionLog, MissionReport};

/// Plain-text delta-v table with aligned columns.
pub fn format_dv_table(report: &MissionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<18} {:>12} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "burn", "epoch_s", "dv_r_ms", "dv_i_ms", "dv_c_ms", "|dv|_ms", "prop_kg"
    );
    for r in &report.dv_table {
        let _ = writeln!(
            s,
            "{:<18} {:>12.3} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>10.5}",
            r.label, r.epoch_s, r.dv_ric_ms[0], r.dv_ric_ms[1], r.dv_ric_ms[2], r.magnitude_ms, r.propellant_kg
        );
    }
    let _ = writeln!(s, "{:<18} {:>12} {:>12} {:>12} {:>12} {:>12.6}", "total", "", "", "", "", report.total_dv_ms);
    s
}

pub fn format_proximity_table(report: &MissionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<12} {:>14} {:>14} {:>14}", "axis", "desired_km", "achieved_km", "diff_km");
    for r in &report.proximity_table {
        let _ = writeln!(
            s,
            "{:<12} {:>14.9} {:>14.9} {:>14.3e}",
            r.axis, r.desired_km, r.achieved_km, r.difference_km
        );
    }
    s
}

pub fn format_summary(report: &MissionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario     {}", report.name);
    let _ = writeln!(s, "law          {:?}", report.law);
    let _ = writeln!(s, "j2           {}", report.j2);
    let _ = writeln!(s, "duration_s   {:.3}", report.duration_s);
    let _ = writeln!(s, "total_dv_ms  {:.6}", report.total_dv_ms);
    let _ = writeln!(s, "final_mass   {:.6} kg", report.final_mass_kg);
    if report.flags.is_empty() {
        let _ = writeln!(s, "feasibility  ok");
    } else {
        for f in &report.flags {
            let _ = writeln!(s, "flag         {f}");
        }
    }
    s
}

fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), IoError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush().map_err(|e| IoError::io(path, e))
}

/// Writes the delta-v and proximity tables (text and CSV) plus a summary
/// into `dir`. Returns the files written.
pub fn write_reports(report: &MissionReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, IoError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| IoError::io(dir, e))?;
    let mut written = Vec::new();
    for (name, text) in [
        ("dv_table.txt", format_dv_table(report)),
        ("proximity.txt", format_proximity_table(report)),
        ("summary.txt", format_summary(report)),
    ] {
        let p = dir.join(name);
        fs::write(&p, text).map_err(|e| IoError::io(&p, e))?;
        written.push(p);
    }

    let p = dir.join("dv_table.csv");
    let rows = report
        .dv_table
        .iter()
        .map(|r| {
            let mut v = vec![r.label.clone(), format!("{:.16e}", r.epoch_s)];
            v.extend(r.dv_ric_ms.iter().map(|x| format!("{x:.16e}")));
            v.push(format!("{:.16e}", r.magnitude_ms));
            v.push(format!("{:.16e}", r.propellant_kg));
            v
        })
        .collect();
    write_csv(&p, &["burn", "epoch_s", "dv_r_ms", "dv_i_ms", "dv_c_ms", "dv_ms", "propellant_kg"], rows)?;
    written.push(p);

    let p = dir.join("proximity.csv");
    let rows = report
        .proximity_table
        .iter()
        .map(|r| {
            vec![
                r.axis.to_string(),
                format!("{:.16e}", r.desired_km),
                format!("{:.16e}", r.achieved_km),
                format!("{:.16e}", r.difference_km),
            ]
        })
        .collect();
    write_csv(&p, &["axis", "desired_km", "achieved_km", "difference_km"], rows)?;
    written.push(p);
    Ok(written)
}

/// Time series, tables and summary for a finished mission.
pub fn write_mission_outputs(log: &MissionLog, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, IoError> {
    let dir = dir.as_ref();
    let mut written = write_reports(&emit_reports(log), dir)?;
    let p = dir.join("timeseries.csv");
    write_timeseries_csv(&p, &log.rows)?;
    written.push(p);
    Ok(written)
}
