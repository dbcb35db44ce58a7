//! Run configuration: tolerances, scan bounds, seed, output format.
//!
//! Defaults live here; a JSON config file (`--config` or the K3GLUE_CONFIG
//! environment variable) overrides the defaults, and command-line flags
//! override the file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_tolerances")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_truncation_radius")]
    pub truncation_radius: f64,
    #[serde(default = "default_n_max")]
    pub n_max: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: OutputFormat,
}

fn default_truncation_radius() -> f64 {
    100.0
}

fn default_n_max() -> u64 {
    100_000
}

fn default_output() -> OutputFormat {
    OutputFormat::Json
}

fn default_tolerances() -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    m.insert("cubic".into(), 1e-8);
    m.insert("ode".into(), 1e-8);
    m.insert("j".into(), 1e-6);
    m.insert("cocycle".into(), 1e-9);
    m.insert("glue".into(), 1e-10);
    m.insert("pullback_fd".into(), 1e-6);
    m.insert("metric_det".into(), 1e-12);
    m.insert("ricci".into(), 1e-6);
    m.insert("ninth_point".into(), 1e-12);
    m.insert("cycle".into(), 1e-8);
    m
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerances: default_tolerances(),
            truncation_radius: default_truncation_radius(),
            n_max: default_n_max(),
            seed: 0,
            output: default_output(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| format!("cannot parse config {}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, tol) in &self.tolerances {
            if !(*tol > 0.0) {
                return Err(format!("tolerance {name} must be positive, got {tol}"));
            }
        }
        if !(self.truncation_radius >= 2.0) {
            return Err(format!(
                "truncation_radius must be >= 2, got {}",
                self.truncation_radius
            ));
        }
        Ok(())
    }

    /// Named tolerance with the built-in default as fallback.
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| default_tolerances().get(name).copied())
            .unwrap_or(1e-9)
    }
}
