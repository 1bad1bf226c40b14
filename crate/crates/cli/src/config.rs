//! Scenario configuration files.

use std::path::{Path, PathBuf};

use braidflow::ScenarioConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, toml::de::Error> {
    toml::from_str(text)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
    parse_config(&text).map_err(|e| ConfigError::Parse { path: path.into(), message: e.to_string() })
}

pub fn to_toml(config: &ScenarioConfig) -> String {
    toml::to_string(config).expect("scenario configs serialize to TOML")
}
