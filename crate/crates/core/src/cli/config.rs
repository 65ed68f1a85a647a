use std::path::Path;

use serde::Deserialize;

/// Defaults read from `--config <file>` (TOML `key = value` pairs).
/// Command-line flags always take precedence.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub tol: Option<f64>,
    pub margin_tol: Option<f64>,
    pub nu_tol: Option<f64>,
    pub radius: Option<f64>,
    pub num_points: Option<usize>,
    pub nu_steps: Option<usize>,
    pub alpha_steps: Option<usize>,
    pub lambda_steps: Option<usize>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}
