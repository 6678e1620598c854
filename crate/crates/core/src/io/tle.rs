use std::f64::consts::TAU;

use chrono::{DateTime, Duration, NaiveDate, Utc};
use thiserror::Error;

use crate::orbital::{anomaly_convert, AnomalyKind, ClassicalOrbitalElements, GravContext, OrbitalError};

const LINE_LEN: usize = 69;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TleError {
    #[error("line {line}: expected {LINE_LEN} characters, found {found}")]
    WrongLength { line: u8, found: usize },
    #[error("line {line}: non-ASCII character")]
    NonAscii { line: u8 },
    #[error("line {line}: must start with '{line} '")]
    BadLineNumber { line: u8 },
    #[error("line {line}: checksum {expected} does not match computed {computed}")]
    Checksum { line: u8, expected: u32, computed: u32 },
    #[error("line {line}: cannot parse {field} from '{text}'")]
    Field { line: u8, field: &'static str, text: String },
    #[error("catalog numbers differ between lines ({line1} vs {line2})")]
    SatnumMismatch { line1: u32, line2: u32 },
    #[error("{field} = {value} is out of range")]
    OutOfRange { field: &'static str, value: f64 },
    #[error("expected a pair of element lines, found {found} usable line(s)")]
    Incomplete { found: usize },
    #[error(transparent)]
    Orbital(#[from] OrbitalError),
}

/// A parsed two-line element set. Angles in degrees, mean motion in rev/day.
#[derive(Debug, Clone, PartialEq)]
pub struct TleRecord {
    pub name: Option<String>,
    pub satnum: u32,
    pub classification: char,
    pub intl_designator: String,
    /// Four-digit year.
    pub epoch_year: i32,
    /// Day of year with fraction, 1.0 = Jan 1 00:00.
    pub epoch_day: f64,
    /// rev/day²
    pub mean_motion_dot: f64,
    /// rev/day³
    pub mean_motion_ddot: f64,
    /// 1/earth radii
    pub bstar: f64,
    pub element_set: u32,
    pub inclination_deg: f64,
    pub raan_deg: f64,
    pub eccentricity: f64,
    pub argp_deg: f64,
    pub mean_anomaly_deg: f64,
    pub mean_motion: f64,
    pub rev_number: u32,
    /// Verified checksum digit of each line.
    pub checksums: [u32; 2],
}

impl TleRecord {
    pub fn epoch(&self) -> Option<DateTime<Utc>> {
        let jan1 = NaiveDate::from_yo_opt(self.epoch_year, 1)?.and_hms_opt(0, 0, 0)?;
        let micros = ((self.epoch_day - 1.0) * 86_400e6).round() as i64;
        Some((jan1 + Duration::microseconds(micros)).and_utc())
    }
}

/// Mod-10 sum of the digits, with '-' counting as one.
pub fn tle_checksum(line: &str) -> u32 {
    line.bytes()
        .take(LINE_LEN - 1)
        .map(|b| match b {
            b'0'..=b'9' => u32::from(b - b'0'),
            b'-' => 1,
            _ => 0,
        })
        .sum::<u32>()
        % 10
}

fn field(line: &str, start: usize, end: usize) -> &str {
    // 1-based inclusive columns
    line[start - 1..end].trim()
}

fn num<T: std::str::FromStr>(line: &str, n: u8, start: usize, end: usize, name: &'static str) -> Result<T, TleError> {
    let text = field(line, start, end);
    text.parse().map_err(|_| TleError::Field {
        line: n,
        field: name,
        text: text.to_string(),
    })
}

/// Fields like " 12345-5" meaning 0.12345e-5.
fn implied_exp(line: &str, n: u8, start: usize, end: usize, name: &'static str) -> Result<f64, TleError> {
    let raw = field(line, start, end);
    let bad = || TleError::Field {
        line: n,
        field: name,
        text: raw.to_string(),
    };
    let (sign, body) = match raw.as_bytes().first() {
        Some(b'-') => (-1.0, &raw[1..]),
        Some(b'+') => (1.0, &raw[1..]),
        _ => (1.0, raw),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let split = body.rfind(['-', '+']).filter(|&k| k > 0).ok_or_else(bad)?;
    let (mant, exp) = body.split_at(split);
    if !mant.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let m: f64 = format!("0.{mant}").parse().map_err(|_| bad())?;
    let e: i32 = exp.parse().map_err(|_| bad())?;
    Ok(sign * m * 10f64.powi(e))
}

fn check_line(line: &str, n: u8) -> Result<(), TleError> {
    if !line.is_ascii() {
        return Err(TleError::NonAscii { line: n });
    }
    if line.len() != LINE_LEN {
        return Err(TleError::WrongLength { line: n, found: line.len() });
    }
    let b = line.as_bytes();
    if b[0] != b'0' + n || b[1] != b' ' {
        return Err(TleError::BadLineNumber { line: n });
    }
    let expected = match b[68] {
        d @ b'0'..=b'9' => u32::from(d - b'0'),
        _ => {
            return Err(TleError::Field {
                line: n,
                field: "checksum",
                text: line[68..].to_string(),
            })
        }
    };
    let computed = tle_checksum(line);
    if expected != computed {
        return Err(TleError::Checksum { line: n, expected, computed });
    }
    Ok(())
}

fn range(field: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64, TleError> {
    if (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(TleError::OutOfRange { field, value })
    }
}

/// Parses one element set from its two lines. Trailing whitespace is ignored.
pub fn parse_tle_lines(line1: &str, line2: &str) -> Result<TleRecord, TleError> {
    let l1 = line1.trim_end();
    let l2 = line2.trim_end();
    check_line(l1, 1)?;
    check_line(l2, 2)?;

    let sat1: u32 = num(l1, 1, 3, 7, "catalog number")?;
    let sat2: u32 = num(l2, 2, 3, 7, "catalog number")?;
    if sat1 != sat2 {
        return Err(TleError::SatnumMismatch { line1: sat1, line2: sat2 });
    }
    let yy: i32 = num(l1, 1, 19, 20, "epoch year")?;
    let epoch_year = if yy < 57 { 2000 + yy } else { 1900 + yy };
    let epoch_day = range("epoch day", num(l1, 1, 21, 32, "epoch day")?, 1.0, 367.0)?;
    let ecc_text = field(l2, 27, 33);
    if ecc_text.len() != 7 || !ecc_text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(TleError::Field {
            line: 2,
            field: "eccentricity",
            text: ecc_text.to_string(),
        });
    }
    let eccentricity: f64 = format!("0.{ecc_text}").parse().expect("digits");
    let mean_motion = num(l2, 2, 53, 63, "mean motion")?;
    if !(mean_motion > 0.0) {
        return Err(TleError::OutOfRange {
            field: "mean motion",
            value: mean_motion,
        });
    }

    Ok(TleRecord {
        name: None,
        satnum: sat1,
        classification: l1.as_bytes()[7] as char,
        intl_designator: field(l1, 10, 17).to_string(),
        epoch_year,
        epoch_day,
        mean_motion_dot: num(l1, 1, 34, 43, "mean motion derivative")?,
        mean_motion_ddot: implied_exp(l1, 1, 45, 52, "mean motion second derivative")?,
        bstar: implied_exp(l1, 1, 54, 61, "bstar")?,
        element_set: num::<u32>(l1, 1, 65, 68, "element set number").unwrap_or(0),
        inclination_deg: range("inclination", num(l2, 2, 9, 16, "inclination")?, 0.0, 180.0)?,
        raan_deg: range("raan", num(l2, 2, 18, 25, "raan")?, 0.0, 360.0)?,
        eccentricity,
        argp_deg: range("argument of perigee", num(l2, 2, 35, 42, "argument of perigee")?, 0.0, 360.0)?,
        mean_anomaly_deg: range("mean anomaly", num(l2, 2, 44, 51, "mean anomaly")?, 0.0, 360.0)?,
        mean_motion,
        rev_number: num::<u32>(l2, 2, 64, 68, "revolution number").unwrap_or(0),
        checksums: [tle_checksum(l1), tle_checksum(l2)],
    })
}

/// Parses every element set in `text`. An optional name line may precede
/// each pair; blank lines are skipped.
pub fn parse_tle(text: &str) -> Result<Vec<TleRecord>, TleError> {
    let lines: Vec<&str> = text.lines().map(str::trim_end).filter(|l| !l.trim().is_empty()).collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < lines.len() {
        let mut name = None;
        if !lines[k].starts_with("1 ") {
            name = Some(lines[k].trim_start_matches("0 ").trim().to_string());
            k += 1;
        }
        if k + 1 >= lines.len() {
            return Err(TleError::Incomplete { found: lines.len() - k });
        }
        let mut rec = parse_tle_lines(lines[k], lines[k + 1])?;
        rec.name = name;
        out.push(rec);
        k += 2;
    }
    if out.is_empty() {
        return Err(TleError::Incomplete { found: 0 });
    }
    Ok(out)
}

/// Osculating-style elements from a TLE: a from the mean motion, ν from M.
pub fn tle_to_coe(rec: &TleRecord, ctx: &GravContext) -> Result<ClassicalOrbitalElements, TleError> {
    let n = rec.mean_motion * TAU / 86_400.0;
    let a = (ctx.mu / (n * n)).cbrt();
    let nu = anomaly_convert(rec.mean_anomaly_deg.to_radians(), rec.eccentricity, AnomalyKind::Mean, AnomalyKind::True)?;
    Ok(ClassicalOrbitalElements::new(
        a,
        rec.eccentricity,
        rec.inclination_deg.to_radians(),
        rec.raan_deg.to_radians(),
        rec.argp_deg.to_radians(),
        nu,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const ISS1: &str = "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927";
    pub(crate) const ISS2: &str = "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537";

    #[test]
    fn parses_reference_set() {
        let r = parse_tle_lines(ISS1, ISS2).unwrap();
        assert_eq!(r.satnum, 25544);
        assert_eq!(r.classification, 'U');
        assert_eq!(r.intl_designator, "98067A");
        assert_eq!(r.epoch_year, 2008);
        assert!((r.epoch_day - 264.51782528).abs() < 1e-12);
        assert!((r.mean_motion_dot + 0.00002182).abs() < 1e-15);
        assert_eq!(r.mean_motion_ddot, 0.0);
        assert!((r.bstar + 0.11606e-4).abs() < 1e-15);
        assert!((r.inclination_deg - 51.6416).abs() < 1e-12);
        assert!((r.eccentricity - 0.0006703).abs() < 1e-15);
        assert!((r.mean_motion - 15.72125391).abs() < 1e-12);
        assert_eq!(r.rev_number, 56353);
        let ep = r.epoch().unwrap();
        assert_eq!(ep.format("%Y-%m-%d %H:%M").to_string(), "2008-09-20 12:25");
    }

    #[test]
    fn checksum_counts_minus_as_one() {
        assert_eq!(tle_checksum(ISS1), 7);
        assert_eq!(tle_checksum(ISS2), 7);
        assert_eq!(tle_checksum("1 -"), 2);
    }

    #[test]
    fn error_kinds_are_distinct() {
        assert!(matches!(parse_tle_lines(&ISS1[..60], ISS2), Err(TleError::WrongLength { line: 1, .. })));
        let mut bad = ISS2.to_string();
        bad.replace_range(68..69, "8");
        assert!(matches!(parse_tle_lines(ISS1, &bad), Err(TleError::Checksum { line: 2, .. })));
        assert!(matches!(parse_tle_lines(ISS2, ISS1), Err(TleError::BadLineNumber { line: 1 })));
        assert!(matches!(parse_tle(ISS1), Err(TleError::Incomplete { .. })));
    }

    #[test]
    fn semi_major_axis_from_mean_motion() {
        let rec = TleRecord {
            mean_motion: 14.8,
            ..parse_tle_lines(ISS1, ISS2).unwrap()
        };
        let c = tle_to_coe(&rec, &GravContext::default()).unwrap();
        assert!((c.a - 7007.4611).abs() < 1e-3, "{}", c.a);
    }

    #[test]
    fn reads_named_sets() {
        let text = format!("ISS (ZARYA)\n{ISS1}\n{ISS2}\n\n{ISS1}\r\n{ISS2}\r\n");
        let v = parse_tle(&text).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].name.as_deref(), Some("ISS (ZARYA)"));
        assert_eq!(v[1].name, None);
    }
}
