//! TLE parsing, scenario files, CSV time series and mission reports.

mod reports;
mod scenario;
mod timeseries;
mod tle;

use std::path::Path;

use thiserror::Error;

pub use reports::{format_dv_table, format_proximity_table, format_summary, write_mission_outputs, write_reports};
pub use scenario::{load_scenario, parse_scenario, save_scenario, scenario_to_toml};
pub use timeseries::{
    read_timeseries, read_timeseries_csv, write_timeseries, write_timeseries_csv, TimeSeriesRecord, TIMESERIES_COLUMNS,
};
pub use tle::{parse_tle, parse_tle_lines, tle_checksum, tle_to_coe, TleError, TleRecord};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("scenario: {0}")]
    Scenario(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Tle(#[from] TleError),
}

impl IoError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::File {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<csv::Error> for IoError {
    fn from(e: csv::Error) -> Self {
        IoError::Csv(e.to_string())
    }
}
