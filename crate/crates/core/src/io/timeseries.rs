use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::IoError;
use crate::mission::{LogRow, MissionPhase};

pub const TIMESERIES_COLUMNS: [&str; 16] = [
    "epoch_s", "phase", "a_km", "e", "i_deg", "raan_deg", "argp_deg", "nu_deg", "vx_kms", "vy_kms", "vz_kms",
    "ric_r_km", "ric_i_km", "ric_c_km", "mass_kg", "cum_dv_ms",
];

/// One CSV row, in the units of the column names.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesRecord {
    pub epoch_s: f64,
    pub phase: MissionPhase,
    pub a_km: f64,
    pub e: f64,
    pub i_deg: f64,
    pub raan_deg: f64,
    pub argp_deg: f64,
    pub nu_deg: f64,
    pub v_kms: [f64; 3],
    pub ric_km: [f64; 3],
    pub mass_kg: f64,
    pub cum_dv_ms: f64,
}

impl From<&LogRow> for TimeSeriesRecord {
    fn from(r: &LogRow) -> Self {
        let c = &r.chaser_coe;
        Self {
            epoch_s: r.epoch,
            phase: r.phase,
            a_km: c.a,
            e: c.e,
            i_deg: c.i.to_degrees(),
            raan_deg: c.raan.to_degrees(),
            argp_deg: c.argp.to_degrees(),
            nu_deg: c.nu.to_degrees(),
            v_kms: r.chaser.v.into(),
            ric_km: r.ric.into(),
            mass_kg: r.mass,
            cum_dv_ms: r.cum_dv * 1000.0,
        }
    }
}

impl TimeSeriesRecord {
    fn floats(&self) -> [f64; 15] {
        [
            self.epoch_s,
            self.a_km,
            self.e,
            self.i_deg,
            self.raan_deg,
            self.argp_deg,
            self.nu_deg,
            self.v_kms[0],
            self.v_kms[1],
            self.v_kms[2],
            self.ric_km[0],
            self.ric_km[1],
            self.ric_km[2],
            self.mass_kg,
            self.cum_dv_ms,
        ]
    }
}

/// Writes the time series. Floats use 17 significant digits, so reading the
/// file back reproduces every value bit for bit.
pub fn write_timeseries<W: Write>(out: W, rows: &[TimeSeriesRecord]) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TIMESERIES_COLUMNS)?;
    for r in rows {
        let f = r.floats();
        let mut rec: Vec<String> = Vec::with_capacity(16);
        rec.push(format!("{:.16e}", f[0]));
        rec.push(r.phase.to_string());
        rec.extend(f[1..].iter().map(|v| format!("{v:.16e}")));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| IoError::Csv(e.to_string()))?;
    Ok(())
}

pub fn read_timeseries<R: Read>(input: R) -> Result<Vec<TimeSeriesRecord>, IoError> {
    let mut rd = csv::Reader::from_reader(input);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != TIMESERIES_COLUMNS {
        return Err(IoError::Csv(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let rec = rec?;
        let num = |idx: usize| -> Result<f64, IoError> {
            rec[idx]
                .parse()
                .map_err(|_| IoError::Csv(format!("row {}: bad {} '{}'", k + 1, TIMESERIES_COLUMNS[idx], &rec[idx])))
        };
        out.push(TimeSeriesRecord {
            epoch_s: num(0)?,
            phase: rec[1].parse().map_err(|e: String| IoError::Csv(format!("row {}: {e}", k + 1)))?,
            a_km: num(2)?,
            e: num(3)?,
            i_deg: num(4)?,
            raan_deg: num(5)?,
            argp_deg: num(6)?,
            nu_deg: num(7)?,
            v_kms: [num(8)?, num(9)?, num(10)?],
            ric_km: [num(11)?, num(12)?, num(13)?],
            mass_kg: num(14)?,
            cum_dv_ms: num(15)?,
        });
    }
    Ok(out)
}

pub fn write_timeseries_csv(path: impl AsRef<Path>, rows: &[LogRow]) -> Result<(), IoError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| IoError::io(path, e))?;
    let recs: Vec<TimeSeriesRecord> = rows.iter().map(TimeSeriesRecord::from).collect();
    write_timeseries(std::io::BufWriter::new(file), &recs)
}

pub fn read_timeseries_csv(path: impl AsRef<Path>) -> Result<Vec<TimeSeriesRecord>, IoError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| IoError::io(path, e))?;
    read_timeseries(file)
}
