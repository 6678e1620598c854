use super::{GuidanceLaw, MissionLog};

/// One line of the delta-v table, m/s in the chaser's pre-burn RIC frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DvRow {
    pub label: String,
    pub epoch_s: f64,
    pub dv_ric_ms: [f64; 3],
    pub magnitude_ms: f64,
    pub propellant_kg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProximityRow {
    pub axis: &'static str,
    pub desired_km: f64,
    pub achieved_km: f64,
    pub difference_km: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionReport {
    pub name: String,
    pub law: GuidanceLaw,
    pub j2: bool,
    pub dv_table: Vec<DvRow>,
    pub total_dv_ms: f64,
    pub proximity_table: Vec<ProximityRow>,
    pub flags: Vec<String>,
    pub duration_s: f64,
    pub final_mass_kg: f64,
}

/// Delta-v and proximity summaries of a finished mission.
pub fn emit_reports(log: &MissionLog) -> MissionReport {
    let dv_table = log
        .burns
        .iter()
        .map(|b| DvRow {
            label: b.label.clone(),
            epoch_s: b.epoch,
            dv_ric_ms: [b.dv.x * 1000.0, b.dv.y * 1000.0, b.dv.z * 1000.0],
            magnitude_ms: b.magnitude() * 1000.0,
            propellant_kg: b.propellant_used,
        })
        .collect();
    let proximity_table = log
        .proximity
        .map(|p| {
            ["radial", "in-track", "cross-track"]
                .into_iter()
                .enumerate()
                .map(|(k, axis)| ProximityRow {
                    axis,
                    desired_km: p.desired[k],
                    achieved_km: p.achieved[k],
                    difference_km: p.achieved[k] - p.desired[k],
                })
                .collect()
        })
        .unwrap_or_default();
    MissionReport {
        name: log.name.clone(),
        law: log.law,
        j2: log.j2,
        dv_table,
        total_dv_ms: log.total_dv() * 1000.0,
        proximity_table,
        flags: log.flags.iter().map(ToString::to_string).collect(),
        duration_s: log.duration(),
        final_mass_kg: log.final_mass,
    }
}
