use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::ScenarioConfig;

/// Reads and validates a JSON scenario. Absent keys take their defaults;
/// unknown keys are rejected.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text, &path.display().to_string())
}

/// Parses scenario JSON; `origin` names the source in error messages.
pub fn parse_scenario(text: &str, origin: &str) -> Result<ScenarioConfig> {
    let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("{origin}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

/// Pretty JSON with every key spelled out.
pub fn write_scenario(config: &ScenarioConfig, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(config).map_err(|e| Error::Parse {
        context: path.display().to_string(),
        message: e.to_string(),
    })?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Scenario name used for output directories: the file stem.
pub fn scenario_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned())
}
