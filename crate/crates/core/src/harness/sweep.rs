//! Load sweeps over fresh random pattern sets.
//!
//! Each `(P, trial)` job draws its patterns from the stream
//! `(master_seed, "patterns", [P, trial])`, trains a network and scores it.
//! Jobs may run on a rayon pool; results are returned ordered by `(P, trial)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::snr::{snr_analysis, SnrResult};
use crate::analysis::spectrum::gram_spectrum;
use crate::dynamics::{run_sequence, update_sync};
use crate::error::{Error, Result};
use crate::harness::patterns::gen_random_patterns_seeded;
use crate::harness::rng::derive_u64;
use crate::kernel::{gram_matrix, KernelConfig};
use crate::model::{overlap, TrainingMode};
use crate::training::{train_klr_with_gram, TrainingConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub p_grid: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub kernel: KernelConfig,
    pub training: TrainingConfig,
    pub with_snr: bool,
    pub with_spectrum: bool,
}

impl SweepConfig {
    pub fn new(n: usize, p_grid: Vec<usize>, trials: usize, master_seed: u64) -> Self {
        Self {
            n,
            p_grid,
            trials,
            master_seed,
            kernel: KernelConfig::ridge(),
            training: TrainingConfig::with_mode(TrainingMode::Sequence),
            with_snr: false,
            with_spectrum: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n", "must be positive"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be positive"));
        }
        if self.p_grid.is_empty() || self.p_grid.contains(&0) {
            return Err(Error::invalid("p_grid", "must be non-empty with P >= 1"));
        }
        if self.p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("p_grid", "must be strictly ascending"));
        }
        self.training.validate()
    }

    /// Derived pattern seed of one job.
    pub fn trial_seed(&self, p: usize, trial: usize) -> u64 {
        derive_u64(self.master_seed, "patterns", &[p as u64, trial as u64])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub p: usize,
    pub trial: usize,
    pub seed: u64,
    /// Sequence mode: the recall criterion. Auto mode: every pattern is a fixed point.
    pub success: bool,
    /// Sequence mode: 1 or 0. Auto mode: fraction of fixed points.
    pub accuracy: f64,
    /// Sequence mode: smallest target overlap over the last cycle. Auto mode:
    /// smallest overlap between a pattern and its one-step image.
    pub min_overlap: f64,
    pub snr: Option<SnrResult>,
    pub d_eff: Option<f64>,
}

pub fn run_trial(cfg: &SweepConfig, p: usize, trial: usize) -> Result<TrialRecord> {
    let seed = cfg.trial_seed(p, trial);
    let patterns = gen_random_patterns_seeded(cfg.n, p, cfg.master_seed, &[p as u64, trial as u64])?;
    let gram = gram_matrix(&patterns, &cfg.kernel)?;
    let training = TrainingConfig { seed, ..cfg.training };
    let (weights, _) = train_klr_with_gram(&patterns, &gram, &training, &cfg.kernel)?;

    let (success, accuracy, min_overlap) = match training.mode {
        TrainingMode::Sequence => {
            let run = run_sequence(&patterns, &weights)?;
            let tail = &run.target_overlap_trace[run.target_overlap_trace.len() - p..];
            let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
            (run.success, if run.success { 1.0 } else { 0.0 }, min)
        }
        TrainingMode::Auto => {
            let mut fixed = 0usize;
            let mut min = f64::INFINITY;
            for mu in 0..p {
                let xi = patterns.state(mu);
                let next = update_sync(&xi, &patterns, &weights)?;
                if next == xi {
                    fixed += 1;
                }
                min = min.min(overlap(&next, &xi)?);
            }
            (fixed == p, fixed as f64 / p as f64, min)
        }
    };

    let snr = if cfg.with_snr {
        Some(snr_analysis(&patterns, &weights, &gram, training.mode)?)
    } else {
        None
    };
    let d_eff = if cfg.with_spectrum {
        Some(gram_spectrum(&gram)?.d_eff)
    } else {
        None
    };

    Ok(TrialRecord {
        p,
        trial,
        seed,
        success,
        accuracy,
        min_overlap,
        snr,
        d_eff,
    })
}

/// Runs every `(P, trial)` job; output is ordered by `(P, trial)` regardless
/// of scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg
        .p_grid
        .iter()
        .flat_map(|&p| (0..cfg.trials).map(move |t| (p, t)))
        .collect();
    jobs.par_iter()
        .map(|&(p, t)| run_trial(cfg, p, t))
        .collect::<Result<Vec<_>>>()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityRow {
    pub p: usize,
    pub trials: usize,
    pub successes: usize,
    pub mean_min_overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub rows: Vec<CapacityRow>,
    /// Largest tested `P` at which every trial succeeded.
    pub p_c: Option<usize>,
    pub records: Vec<TrialRecord>,
}

/// Groups trial records by `P` (records must be ordered by `P`).
pub fn group_by_p(records: &[TrialRecord]) -> Vec<(usize, &[TrialRecord])> {
    records
        .chunk_by(|a, b| a.p == b.p)
        .map(|chunk| (chunk[0].p, chunk))
        .collect()
}

pub fn summarize_capacity(records: Vec<TrialRecord>) -> CapacityResult {
    let rows: Vec<CapacityRow> = group_by_p(&records)
        .into_iter()
        .map(|(p, chunk)| CapacityRow {
            p,
            trials: chunk.len(),
            successes: chunk.iter().filter(|r| r.success).count(),
            mean_min_overlap: chunk.iter().map(|r| r.min_overlap).sum::<f64>() / chunk.len() as f64,
        })
        .collect();
    let p_c = rows
        .iter()
        .filter(|r| r.successes == r.trials)
        .map(|r| r.p)
        .max();
    CapacityResult { rows, p_c, records }
}

/// Sequence-capacity sweep: success counts per `P` and the capacity `P_c`.
pub fn capacity_sweep(cfg: &SweepConfig) -> Result<CapacityResult> {
    Ok(summarize_capacity(run_sweep(cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrRow {
    pub p: usize,
    pub signal_mean: f64,
    pub noise_std: f64,
    /// Mean of the per-trial ratios; `None` if any trial had `σ = 0`.
    pub snr: Option<f64>,
}

/// Per-`P` averages of the SNR statistics (records must carry SNR).
pub fn summarize_snr(records: &[TrialRecord]) -> Result<Vec<SnrRow>> {
    group_by_p(records)
        .into_iter()
        .map(|(p, chunk)| {
            let snrs = chunk
                .iter()
                .map(|r| r.snr.ok_or(Error::Config("sweep ran without SNR".into())))
                .collect::<Result<Vec<_>>>()?;
            let k = snrs.len() as f64;
            let ratios: Option<Vec<f64>> = snrs.iter().map(|s| s.snr).collect();
            Ok(SnrRow {
                p,
                signal_mean: snrs.iter().map(|s| s.signal_mean).sum::<f64>() / k,
                noise_std: snrs.iter().map(|s| s.noise_std).sum::<f64>() / k,
                snr: ratios.map(|r| r.iter().sum::<f64>() / k),
            })
        })
        .collect()
}
