//! Random pattern generation and the pattern CSV format.
//!
//! A pattern file is UTF-8 CSV with one pattern per row and `-1`/`1` fields,
//! no header. A JSON sidecar `<stem>.meta.json` records shape and provenance.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::rng::{stream, RNG_ALGORITHM};
use crate::pattern::PatternSet;

/// i.i.d. uniform ±1 entries from the stream `(seed, "patterns", [])`.
pub fn gen_random_patterns(n: usize, p: usize, seed: u64) -> Result<PatternSet> {
    gen_random_patterns_seeded(n, p, seed, &[])
}

/// As [`gen_random_patterns`] with extra stream indices (e.g. `[P, trial]`).
pub fn gen_random_patterns_seeded(
    n: usize,
    p: usize,
    master: u64,
    indices: &[u64],
) -> Result<PatternSet> {
    if n == 0 || p == 0 {
        return Err(Error::invalid("pattern shape", format!("need n, p >= 1, got n={n}, p={p}")));
    }
    let mut rng = stream(master, "patterns", indices);
    let data = Array2::from_shape_simple_fn((p, n), || if rng.gen::<bool>() { 1.0 } else { -1.0 });
    PatternSet::new(data)
}

/// Sidecar metadata for pattern and embedding files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileMeta {
    pub kind: String,
    /// Row count.
    pub p: usize,
    /// Column count (`N` for patterns, `D` for embeddings).
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(default)]
    pub provenance: serde_json::Value,
}

/// `<dir>/<stem>.meta.json` for a data file path.
pub fn meta_path(path: &Path) -> PathBuf {
    sibling(path, "meta.json")
}

/// `<dir>/<stem>.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    path.with_file_name(format!("{stem}.{suffix}"))
}

pub fn write_meta(path: &Path, meta: &FileMeta) -> Result<()> {
    let target = meta_path(path);
    let mut text = serde_json::to_string_pretty(meta)?;
    text.push('\n');
    fs::write(&target, text).map_err(|e| Error::io(&target, e))
}

pub fn read_meta(path: &Path) -> Result<Option<FileMeta>> {
    let target = meta_path(path);
    if !target.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&target).map_err(|e| Error::io(&target, e))?;
    serde_json::from_str(&text).map(Some).map_err(|e| Error::Parse {
        path: target,
        location: Some(format!("line {}", e.line())),
        message: e.to_string(),
    })
}

pub fn write_patterns_csv(path: &Path, patterns: &PatternSet) -> Result<()> {
    let mut out = String::with_capacity(patterns.p() * patterns.n() * 3);
    for row in patterns.to_rows() {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn write_patterns(path: &Path, patterns: &PatternSet, seed: Option<u64>, provenance: serde_json::Value) -> Result<()> {
    write_patterns_csv(path, patterns)?;
    write_meta(
        path,
        &FileMeta {
            kind: "patterns".into(),
            p: patterns.p(),
            d: patterns.n(),
            seed,
            rng: seed.map(|_| RNG_ALGORITHM.to_string()),
            provenance,
        },
    )
}

/// Reads a pattern CSV (sidecar optional, checked when present).
pub fn read_patterns(path: &Path) -> Result<PatternSet> {
    let matrix = crate::harness::embeddings::read_numeric_csv(path)?;
    let patterns = PatternSet::new(matrix).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        location: None,
        message: e.to_string(),
    })?;
    if let Some(meta) = read_meta(path)? {
        if meta.p != patterns.p() || meta.d != patterns.n() {
            return Err(Error::Parse {
                path: meta_path(path),
                location: None,
                message: format!(
                    "sidecar declares {}x{}, file holds {}x{}",
                    meta.p,
                    meta.d,
                    patterns.p(),
                    patterns.n()
                ),
            });
        }
    }
    Ok(patterns)
}
