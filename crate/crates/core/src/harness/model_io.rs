//! Model files: one JSON document holding kernel, training provenance,
//! patterns (as integers) and α (shortest round-trip decimal floats).

use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::KernelConfig;
use crate::model::{DualWeights, TrainingMeta, TrainingMode};
use crate::pattern::PatternSet;

pub const MODEL_FORMAT: &str = "klr-hopfield-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    kernel: KernelConfig,
    mode: TrainingMode,
    training: TrainingMeta,
    n: usize,
    p: usize,
    patterns: Vec<Vec<i8>>,
    alpha: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct Header {
    format: Option<String>,
    version: Option<u32>,
}

pub fn model_to_json(weights: &DualWeights, patterns: &PatternSet) -> Result<String> {
    weights.check_patterns(patterns)?;
    let file = ModelFile {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        kernel: *weights.kernel(),
        mode: weights.mode(),
        training: *weights.meta(),
        n: patterns.n(),
        p: patterns.p(),
        patterns: patterns.to_rows(),
        alpha: weights.alpha().rows().into_iter().map(|r| r.to_vec()).collect(),
    };
    Ok(serde_json::to_string(&file)?)
}

pub fn model_from_json(text: &str) -> Result<(DualWeights, PatternSet)> {
    let header: Header = serde_json::from_str(text)
        .map_err(|e| Error::ModelVersion(format!("not a model document: {e}")))?;
    match (header.format.as_deref(), header.version) {
        (Some(MODEL_FORMAT), Some(MODEL_VERSION)) => {}
        (Some(MODEL_FORMAT), v) => {
            return Err(Error::ModelVersion(format!(
                "version {v:?}, this build reads version {MODEL_VERSION}"
            )))
        }
        (f, _) => {
            return Err(Error::ModelVersion(format!(
                "format {f:?}, expected '{MODEL_FORMAT}'"
            )))
        }
    }
    let file: ModelFile = serde_json::from_str(text)?;
    let patterns = PatternSet::from_rows(&file.patterns)?;
    if patterns.p() != file.p || patterns.n() != file.n {
        return Err(Error::Config(format!(
            "model declares {}x{} patterns, holds {}x{}",
            file.p,
            file.n,
            patterns.p(),
            patterns.n()
        )));
    }
    let mut alpha = Array2::zeros((file.p, file.n));
    if file.alpha.len() != file.p || file.alpha.iter().any(|r| r.len() != file.n) {
        return Err(Error::Config("alpha shape does not match declared P x N".into()));
    }
    for (mu, row) in file.alpha.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            alpha[[mu, i]] = v;
        }
    }
    let weights = DualWeights::new(alpha, file.kernel, file.mode, file.training)?;
    Ok((weights, patterns))
}

pub fn save_model(weights: &DualWeights, patterns: &PatternSet, path: &Path) -> Result<()> {
    let mut text = model_to_json(weights, patterns)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<(DualWeights, PatternSet)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}
