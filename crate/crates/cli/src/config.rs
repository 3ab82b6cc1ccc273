//! Optional TOML configuration file whose keys mirror the command-line
//! flags (`l-nm = 1000`, or `l_nm = 1000`). Flags override file values.

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    #[serde(alias = "l_nm")]
    pub l_nm: Option<f64>,
    #[serde(alias = "d_nm")]
    pub d_nm: Option<f64>,
    #[serde(alias = "eps_b")]
    pub eps_b: Option<f64>,
    #[serde(alias = "omega_p")]
    pub omega_p: Option<f64>,
    #[serde(alias = "radius_nm")]
    pub radius_nm: Option<f64>,
    #[serde(alias = "delta_nm")]
    pub delta_nm: Option<f64>,
    pub layers: Option<f64>,
    #[serde(alias = "eps_sub")]
    pub eps_sub: Option<f64>,
    #[serde(alias = "eps_sup")]
    pub eps_sup: Option<f64>,
    pub orientation: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    #[serde(alias = "rel_tol")]
    pub rel_tol: Option<f64>,
    #[serde(alias = "abs_tol")]
    pub abs_tol: Option<f64>,
    pub threshold: Option<f64>,
    #[serde(alias = "d_from")]
    pub d_from: Option<f64>,
    #[serde(alias = "d_to")]
    pub d_to: Option<f64>,
}

#[derive(Debug)]
pub enum ConfigError {
    Read(std::io::Error),
    Parse(String),
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(ConfigError::Read)?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))
    }
}
