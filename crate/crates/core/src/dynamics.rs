//! Synchronous retrieval dynamics `s_i(t+1) = sign(h_i(s(t)))`.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::rng::stream;
use crate::model::{local_field, overlap, DualWeights, TrainingMode};
use crate::pattern::{NetworkState, PatternSet};
use crate::training::target_index;

/// Default update budget for static recall.
pub const DEFAULT_MAX_STEPS: usize = 100;

/// Number of sequence steps per stored pattern.
pub const SEQUENCE_STEPS_PER_PATTERN: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunKind {
    Converged,
    Period2Cycle,
    MaxStepsReached,
}

/// How a run ended and how many synchronous updates it applied.
///
/// A state whose first update leaves it unchanged reports `steps = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStatus {
    pub kind: RunKind,
    pub steps: usize,
}

impl RunStatus {
    pub fn converged(&self) -> bool {
        self.kind == RunKind::Converged
    }
}

/// One synchronous update of every neuron from the same field.
pub fn update_sync(
    s: &NetworkState,
    patterns: &PatternSet,
    weights: &DualWeights,
) -> Result<NetworkState> {
    let h = local_field(s, patterns, weights)?;
    Ok(NetworkState::from_signs(h.view()))
}

/// Iterates [`update_sync`] until a fixed point, a 2-cycle, or `max_steps`.
pub fn run_to_convergence(
    s0: &NetworkState,
    patterns: &PatternSet,
    weights: &DualWeights,
    max_steps: usize,
) -> Result<(NetworkState, RunStatus)> {
    if max_steps == 0 {
        return Err(Error::invalid("max_steps", "must be at least 1"));
    }
    let mut prev: Option<NetworkState> = None;
    let mut current = s0.clone();
    for step in 1..=max_steps {
        let next = update_sync(&current, patterns, weights)?;
        if next == current {
            return Ok((
                next,
                RunStatus {
                    kind: RunKind::Converged,
                    steps: step,
                },
            ));
        }
        if prev.as_ref() == Some(&next) {
            return Ok((
                next,
                RunStatus {
                    kind: RunKind::Period2Cycle,
                    steps: step,
                },
            ));
        }
        prev = Some(std::mem::replace(&mut current, next));
    }
    Ok((
        current,
        RunStatus {
            kind: RunKind::MaxStepsReached,
            steps: max_steps,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecallTrial {
    pub success: bool,
    pub final_overlap: f64,
    pub status: RunStatus,
}

/// Number of bits flipped for a given corruption fraction.
pub fn flip_count(noise_fraction: f64, n: usize) -> usize {
    (noise_fraction * n as f64).round() as usize
}

/// Corrupts `ξ^μ` with exactly `round(f·N)` distinct random bit flips and
/// checks whether the dynamics restore it exactly. Trial `t` draws from the
/// stream `(seed, "recall", [μ, t])`.
pub fn recall_noisy(
    patterns: &PatternSet,
    weights: &DualWeights,
    pattern_index: usize,
    noise_fraction: f64,
    trials: usize,
    seed: u64,
    max_steps: usize,
) -> Result<Vec<RecallTrial>> {
    if !(0.0..=1.0).contains(&noise_fraction) {
        return Err(Error::invalid(
            "noise_fraction",
            format!("must lie in [0, 1], got {noise_fraction}"),
        ));
    }
    let xi = patterns.get(pattern_index)?;
    let n = patterns.n();
    let flips = flip_count(noise_fraction, n);
    (0..trials)
        .map(|trial| {
            let mut rng = stream(seed, "recall", &[pattern_index as u64, trial as u64]);
            let idx = sample(&mut rng, n, flips).into_vec();
            let cue = xi.flipped(&idx);
            let (end, status) = run_to_convergence(&cue, patterns, weights, max_steps)?;
            Ok(RecallTrial {
                success: end == xi,
                final_overlap: overlap(&end, &xi)?,
                status,
            })
        })
        .collect()
}

/// Fraction of stored patterns that are exact fixed points of one update.
pub fn fixed_point_fraction(patterns: &PatternSet, weights: &DualWeights) -> Result<f64> {
    let mut fixed = 0usize;
    for mu in 0..patterns.p() {
        let xi = patterns.state(mu);
        if update_sync(&xi, patterns, weights)? == xi {
            fixed += 1;
        }
    }
    Ok(fixed as f64 / patterns.p() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceRunResult {
    pub success: bool,
    pub first_error_step: Option<usize>,
    /// `overlap(s(t), target(t))` for `t = 1..=6P`.
    pub target_overlap_trace: Vec<f64>,
    /// Row `t−1` holds the overlaps of `s(t)` with every stored pattern.
    pub full_overlap_matrix: Option<Vec<Vec<f64>>>,
}

/// True iff some window of `p` consecutive steps has every target overlap
/// exactly 1.
pub fn sequence_success(trace: &[f64], p: usize) -> bool {
    longest_exact_run(trace) >= p
}

fn longest_exact_run(trace: &[f64]) -> usize {
    let (mut run, mut best) = (0usize, 0usize);
    for &m in trace {
        run = if m == 1.0 { run + 1 } else { 0 };
        best = best.max(run);
    }
    best
}

/// Runs the sequence-recall protocol: start at `ξ^1`, apply `6P` updates and
/// compare `s(t)` with `ξ^{(t mod P)+1}` at every step.
pub fn run_sequence(
    patterns: &PatternSet,
    weights: &DualWeights,
) -> Result<SequenceRunResult> {
    run_sequence_with(patterns, weights, false)
}

pub fn run_sequence_with(
    patterns: &PatternSet,
    weights: &DualWeights,
    record_full: bool,
) -> Result<SequenceRunResult> {
    if weights.mode() != TrainingMode::Sequence {
        return Err(Error::Config(format!(
            "sequence recall needs sequence-trained weights, got {} mode",
            weights.mode()
        )));
    }
    weights.check_patterns(patterns)?;
    let p = patterns.p();
    let n = patterns.n() as f64;
    let total = SEQUENCE_STEPS_PER_PATTERN * p;

    let mut state = patterns.state(0);
    let mut trace = Vec::with_capacity(total);
    let mut full = record_full.then(|| Vec::with_capacity(total));
    let mut first_error_step = None;
    let mut run = 0usize;
    let mut cycle_done = false;

    for t in 1..=total {
        state = update_sync(&state, patterns, weights)?;
        let target = target_index(t - 1, p, TrainingMode::Sequence);
        let m = overlap(&state, &patterns.state(target))?;
        trace.push(m);
        if m == 1.0 {
            run += 1;
            if run >= p {
                cycle_done = true;
            }
        } else {
            run = 0;
            if !cycle_done && first_error_step.is_none() {
                first_error_step = Some(t);
            }
        }
        if let Some(rows) = full.as_mut() {
            let dots = patterns.data().dot(&state.view());
            rows.push(dots.iter().map(|d| d / n).collect());
        }
    }

    Ok(SequenceRunResult {
        success: sequence_success(&trace, p),
        first_error_step,
        target_overlap_trace: trace,
        full_overlap_matrix: full,
    })
}
