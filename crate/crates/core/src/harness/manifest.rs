use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::rng::RNG_ALGORITHM;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedSeed {
    pub label: String,
    pub indices: Vec<u64>,
    pub seed: u64,
}

/// Everything needed to rerun an experiment. Timestamps are the only fields
/// that differ between identical reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub experiment: String,
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
    pub rng_algorithm: String,
    pub derived_seeds: Vec<DerivedSeed>,
    pub software_version: String,
    pub outputs: Vec<String>,
    pub started_at: String,
    pub finished_at: String,
}

impl ExperimentManifest {
    pub fn start(experiment: &str, config: serde_json::Value, master_seed: Option<u64>) -> Self {
        let now = chrono::Utc::now().to_rfc3339();
        Self {
            experiment: experiment.to_string(),
            config,
            master_seed,
            rng_algorithm: RNG_ALGORITHM.to_string(),
            derived_seeds: Vec::new(),
            software_version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            outputs: Vec::new(),
            started_at: now.clone(),
            finished_at: now,
        }
    }

    pub fn add_seed(&mut self, label: &str, indices: &[u64], seed: u64) {
        self.derived_seeds.push(DerivedSeed {
            label: label.to_string(),
            indices: indices.to_vec(),
            seed,
        });
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn finish_and_write(mut self, path: &Path) -> Result<()> {
        self.finished_at = chrono::Utc::now().to_rfc3339();
        let mut text = serde_json::to_string_pretty(&self)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}
