//! Dual weights, local fields and the pseudo-energy.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::kernel::{kernel_row, KernelConfig};
use crate::pattern::{NetworkState, PatternSet, Probe};

/// What the network was trained to map each stored pattern to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrainingMode {
    /// `ξ^μ → ξ^μ` (static memory).
    Auto,
    /// `ξ^μ → ξ^{μ+1}`, with `ξ^{P+1} = ξ^1` (limit cycle).
    Sequence,
}

impl std::fmt::Display for TrainingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TrainingMode::Auto => "auto",
            TrainingMode::Sequence => "sequence",
        })
    }
}

impl std::str::FromStr for TrainingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(TrainingMode::Auto),
            "sequence" => Ok(TrainingMode::Sequence),
            other => Err(Error::invalid(
                "mode",
                format!("expected 'auto' or 'sequence', got '{other}'"),
            )),
        }
    }
}

/// Divisor applied to the summed logistic loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossNormalization {
    /// Divide by `P·N`.
    Mean,
    /// No division.
    Sum,
}

impl LossNormalization {
    pub fn factor(&self, p: usize, n: usize) -> f64 {
        match self {
            LossNormalization::Mean => 1.0 / (p as f64 * n as f64),
            LossNormalization::Sum => 1.0,
        }
    }
}

impl std::str::FromStr for LossNormalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(LossNormalization::Mean),
            "sum" => Ok(LossNormalization::Sum),
            other => Err(Error::invalid(
                "normalization",
                format!("expected 'mean' or 'sum', got '{other}'"),
            )),
        }
    }
}

/// Provenance of a trained weight matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub learning_rate: f64,
    pub iterations: usize,
    pub weight_decay: f64,
    pub loss_normalization: LossNormalization,
    pub seed: u64,
}

impl TrainingMeta {
    /// Metadata for weights that were set by hand rather than trained.
    pub fn untrained() -> Self {
        Self {
            learning_rate: 0.0,
            iterations: 0,
            weight_decay: 0.0,
            loss_normalization: LossNormalization::Sum,
            seed: 0,
        }
    }
}

/// `P×N` dual variables `α_{μi}` plus the kernel and training provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWeights {
    alpha: Array2<f64>,
    kernel: KernelConfig,
    mode: TrainingMode,
    meta: TrainingMeta,
}

impl DualWeights {
    pub fn new(
        alpha: Array2<f64>,
        kernel: KernelConfig,
        mode: TrainingMode,
        meta: TrainingMeta,
    ) -> Result<Self> {
        if let Some(((mu, i), v)) = alpha.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(
                "alpha",
                format!("entry ({mu}, {i}) is not finite ({v})"),
            ));
        }
        Ok(Self {
            alpha,
            kernel,
            mode,
            meta,
        })
    }

    /// All-zero weights for a `p×n` network.
    pub fn zeros(p: usize, n: usize, kernel: KernelConfig, mode: TrainingMode) -> Self {
        Self {
            alpha: Array2::zeros((p, n)),
            kernel,
            mode,
            meta: TrainingMeta::untrained(),
        }
    }

    pub fn alpha(&self) -> &Array2<f64> {
        &self.alpha
    }

    pub fn kernel(&self) -> &KernelConfig {
        &self.kernel
    }

    pub fn mode(&self) -> TrainingMode {
        self.mode
    }

    pub fn meta(&self) -> &TrainingMeta {
        &self.meta
    }

    /// Checks that these weights were trained for `patterns`.
    pub fn check_patterns(&self, patterns: &PatternSet) -> Result<()> {
        check_len("alpha rows vs pattern count", patterns.p(), self.alpha.nrows())?;
        check_len("alpha columns vs neuron count", patterns.n(), self.alpha.ncols())
    }
}

/// Local field `h_i(s) = Σ_μ α_{μi} K(s, ξ^μ)`; `s` may be continuous.
pub fn local_field<'a>(
    s: impl Into<Probe<'a>>,
    patterns: &PatternSet,
    weights: &DualWeights,
) -> Result<Array1<f64>> {
    weights.check_patterns(patterns)?;
    let k = kernel_row(s, patterns, weights.kernel())?;
    Ok(weights.alpha().t().dot(&k))
}

/// Pseudo-energy `V(s) = −Σ_i s_i h_i(s)`.
///
/// Synchronous updates need not decrease `V`, so this is a heuristic
/// alignment measure rather than a Lyapunov function.
pub fn pseudo_energy<'a>(
    s: impl Into<Probe<'a>>,
    patterns: &PatternSet,
    weights: &DualWeights,
) -> Result<f64> {
    let s = s.into();
    let h = local_field(s, patterns, weights)?;
    Ok(-s.view().dot(&h))
}

/// Normalised inner product `(1/N) Σ_i s_i ξ_i`.
pub fn overlap(s: &NetworkState, xi: &NetworkState) -> Result<f64> {
    check_len("overlap argument length", xi.len(), s.len())?;
    Ok(s.view().dot(&xi.view()) / s.len() as f64)
}
