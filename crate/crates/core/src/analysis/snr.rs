//! Signal / crosstalk decomposition of the local field at stored patterns.
//!
//! For input `ξ^μ` with target bit `y_{μi}` the aligned field splits as
//!
//! ```text
//! y_{μi} h_i(ξ^μ) = y_{μi} α_{μi} K_{μμ}  +  y_{μi} Σ_{ν≠μ} α_{νi} K_{μν}
//!                   └──── signal ────┘     └─────── crosstalk ───────┘
//! ```
//!
//! `S` is the mean signal sample and `σ` the population standard deviation of
//! the pooled crosstalk samples.

use ndarray::{Array2, Zip};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result};
use crate::model::{DualWeights, TrainingMode};
use crate::pattern::PatternSet;
use crate::training::build_targets;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrResult {
    pub p: usize,
    pub signal_mean: f64,
    pub noise_mean: f64,
    pub noise_std: f64,
    /// `S/σ`; `None` when `σ = 0`.
    pub snr: Option<f64>,
    pub signal_samples: usize,
    pub noise_samples: usize,
}

/// Per-sample signal and crosstalk matrices, both `P×N`.
pub fn snr_components(
    patterns: &PatternSet,
    weights: &DualWeights,
    gram: &Array2<f64>,
    mode: TrainingMode,
) -> Result<(Array2<f64>, Array2<f64>)> {
    weights.check_patterns(patterns)?;
    let p = patterns.p();
    check_len("gram rows", p, gram.nrows())?;
    check_len("gram columns", p, gram.ncols())?;

    let y = build_targets(patterns, mode);
    let alpha = weights.alpha();
    let diag = gram.diag();

    let mut signal = alpha.clone();
    Zip::from(signal.rows_mut())
        .and(&diag)
        .for_each(|mut row, &k| row *= k);

    let mut off_diag = gram.clone();
    off_diag.diag_mut().fill(0.0);
    let mut noise = off_diag.dot(alpha);

    signal *= &y.y();
    noise *= &y.y();
    Ok((signal, noise))
}

pub fn snr_analysis(
    patterns: &PatternSet,
    weights: &DualWeights,
    gram: &Array2<f64>,
    mode: TrainingMode,
) -> Result<SnrResult> {
    let (signal, noise) = snr_components(patterns, weights, gram, mode)?;
    let count = signal.len() as f64;
    let signal_mean = signal.sum() / count;
    let noise_mean = noise.sum() / count;
    let noise_var = noise
        .iter()
        .map(|v| (v - noise_mean) * (v - noise_mean))
        .sum::<f64>()
        / count;
    let noise_std = noise_var.sqrt();
    Ok(SnrResult {
        p: patterns.p(),
        signal_mean,
        noise_mean,
        noise_std,
        snr: (noise_std > 0.0).then(|| signal_mean / noise_std),
        signal_samples: signal.len(),
        noise_samples: noise.len(),
    })
}
