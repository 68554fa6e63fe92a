//! Storage load against the `2·D_eff` separability reference.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::sweep::{group_by_p, run_sweep, SweepConfig, TrialRecord};
use crate::kernel::KernelConfig;
use crate::training::TrainingConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverRow {
    pub p: usize,
    /// Mean over trials.
    pub d_eff: f64,
    pub cover_bound: f64,
    /// Sequence mode: trial success rate. Auto mode: mean fixed-point fraction.
    pub accuracy: f64,
}

/// Per-`P` rows from sweep records that carry `d_eff`.
pub fn cover_rows(records: &[TrialRecord]) -> Result<Vec<CoverRow>> {
    group_by_p(records)
        .into_iter()
        .map(|(p, chunk)| {
            let k = chunk.len() as f64;
            let d_eff = chunk
                .iter()
                .map(|r| r.d_eff.ok_or(Error::Config("sweep ran without spectrum".into())))
                .sum::<Result<f64>>()?
                / k;
            Ok(CoverRow {
                p,
                d_eff,
                cover_bound: 2.0 * d_eff,
                accuracy: chunk.iter().map(|r| r.accuracy).sum::<f64>() / k,
            })
        })
        .collect()
}

/// Fresh random patterns per `(P, trial)`: Gram spectrum, trained network,
/// recall accuracy. The training mode (sequence by default) comes from
/// `trainer`.
pub fn cover_comparison(
    n: usize,
    p_grid: &[usize],
    kernel: KernelConfig,
    trainer: TrainingConfig,
    trials: usize,
    seed: u64,
) -> Result<Vec<CoverRow>> {
    let cfg = SweepConfig {
        kernel,
        training: trainer,
        with_spectrum: true,
        ..SweepConfig::new(n, p_grid.to_vec(), trials, seed)
    };
    cover_rows(&run_sweep(&cfg)?)
}
