use std::fs;
use std::path::Path;

use super::IoError;
use crate::mission::ScenarioConfig;

/// Parses a TOML scenario. Errors name the offending field path.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, IoError> {
    let de = toml::Deserializer::parse(text).map_err(|e| IoError::Scenario(e.to_string()))?;
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        IoError::Scenario(format!("{path}: {}", e.into_inner().message()))
    })?;
    cfg.validate().map_err(IoError::Scenario)?;
    Ok(cfg)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    parse_scenario(&text)
}

pub fn scenario_to_toml(cfg: &ScenarioConfig) -> Result<String, IoError> {
    toml::to_string_pretty(cfg).map_err(|e| IoError::Scenario(e.to_string()))
}

pub fn save_scenario(cfg: &ScenarioConfig, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    fs::write(path, scenario_to_toml(cfg)?).map_err(|e| IoError::io(path, e))
}
