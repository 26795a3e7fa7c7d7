//! Experiment files for `sweep --config`.
//!
//! Every key is optional; command-line flags take precedence.
//!
//! ```toml
//! n = 7
//! r = 3
//! s = 1
//! l_from = 6
//! l_to = 12
//! method = "auto"
//! alpha_source = "exact"
//! seed = 0
//! out = "g731.csv"
//! resume = true
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: Option<u32>,
    pub r: Option<u32>,
    pub s: Option<u32>,
    pub l_from: Option<u64>,
    pub l_to: Option<u64>,
    pub method: Option<String>,
    pub alpha_source: Option<String>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub iterations: Option<u64>,
    pub patience: Option<u64>,
    pub cap: Option<usize>,
    pub budget: Option<u64>,
    pub bb_cap: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub resume: Option<bool>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid experiment file {}", path.display()))
    }
}
