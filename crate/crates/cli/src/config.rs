//! Optional TOML run configuration; command-line flags override file values.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

/// File mirror of the command-line flags. All fields optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub visibility: Option<f64>,
    pub p_coh: Option<f64>,
    pub p_diag: Option<f64>,
    pub p_white: Option<f64>,
    pub rate: Option<f64>,
    pub integration_s: Option<f64>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub fidelity: Option<f64>,
    pub a_value: Option<f64>,
    pub pop_sum: Option<f64>,
    pub ceiling: Option<f64>,
    pub tau_um: Option<f64>,
    pub max_delay_um: Option<f64>,
    pub steps: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
    }
}
