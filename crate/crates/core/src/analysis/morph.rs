//! Morphing between two stored attractors.
//!
//! Initial states are `sign((1−r)ξ^A + rξ^B + ε)` with `ε ~ N(0, ν²I)`. Each
//! is relaxed with the synchronous dynamics and compared against both
//! endpoints. The continuous counterpart, [`effective_potential_profile`],
//! evaluates the pseudo-energy on the interpolation path projected onto the
//! sphere of radius `√N`.

use ndarray::Array1;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dynamics::{run_to_convergence, RunKind, RunStatus, DEFAULT_MAX_STEPS};
use crate::error::{check_len, Error, Result};
use crate::harness::rng::stream;
use crate::model::{overlap, pseudo_energy, DualWeights, TrainingMode};
use crate::pattern::{sign, NetworkState, PatternSet};

/// Trials whose best endpoint overlap falls below this are spurious.
pub const SPURIOUS_THRESHOLD: f64 = 0.9;

/// `points` evenly spaced ratios covering `[0, 1]`.
pub fn uniform_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::invalid("grid", "need at least 2 points"));
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(|k| k as f64 / last).collect())
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.first() != Some(&0.0) || grid.last() != Some(&1.0) {
        return Err(Error::invalid("ratio_grid", "must start at 0 and end at 1"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("ratio_grid", "must be strictly increasing"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphConfig {
    pub ratio_grid: Vec<f64>,
    pub nu: f64,
    pub trials: usize,
    pub seed: u64,
    pub max_steps: usize,
}

impl Default for MorphConfig {
    fn default() -> Self {
        Self {
            ratio_grid: uniform_grid(101).expect("valid grid"),
            nu: 0.01,
            trials: 10,
            seed: 0,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

impl MorphConfig {
    pub fn validate(&self) -> Result<()> {
        validate_grid(&self.ratio_grid)?;
        if !(self.nu.is_finite() && self.nu >= 0.0) {
            return Err(Error::invalid("nu", format!("must be >= 0, got {}", self.nu)));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps", "must be positive"));
        }
        Ok(())
    }
}

/// Raw outcome of one morphing trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorphTrial {
    pub overlap_a: f64,
    pub overlap_b: f64,
    pub status: RunStatus,
}

impl MorphTrial {
    pub fn best_overlap(&self) -> f64 {
        self.overlap_a.abs().max(self.overlap_b.abs())
    }
}

/// Aggregates at one interpolation ratio. Standard deviations are
/// population deviations over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphPoint {
    pub r: f64,
    pub mean_overlap_a: f64,
    pub std_overlap_a: f64,
    pub mean_overlap_b: f64,
    pub std_overlap_b: f64,
    pub mean_steps: f64,
    pub spurious_rate: f64,
    /// Trials that hit `max_steps` or a 2-cycle (recorded at their step count).
    pub non_converged: usize,
    pub trials: Vec<MorphTrial>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphResult {
    pub a: usize,
    pub b: usize,
    pub points: Vec<MorphPoint>,
}

impl MorphResult {
    /// Fraction of trial indices whose run stays within `threshold` of one of
    /// the endpoints at every grid ratio.
    pub fn sharp_trial_fraction(&self, threshold: f64) -> f64 {
        let trials = self.points.first().map(|p| p.trials.len()).unwrap_or(0);
        if trials == 0 {
            return 0.0;
        }
        let sharp = (0..trials)
            .filter(|&t| {
                self.points
                    .iter()
                    .all(|p| p.trials[t].best_overlap() >= threshold)
            })
            .count();
        sharp as f64 / trials as f64
    }
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// `sign((1−r)ξ^A + rξ^B + ε)` with `ε_i ~ N(0, ν²)`. With `ν = 0` the rng is
/// not touched.
pub fn morph_state<R: Rng + ?Sized>(
    xi_a: &NetworkState,
    xi_b: &NetworkState,
    r: f64,
    nu: f64,
    rng: &mut R,
) -> Result<NetworkState> {
    check_len("morph endpoint length", xi_a.len(), xi_b.len())?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::invalid("r", format!("must lie in [0, 1], got {r}")));
    }
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(Error::invalid("nu", format!("must be >= 0, got {nu}")));
    }
    let mixed = xi_a.view().mapv(|a| (1.0 - r) * a) + xi_b.view().mapv(|b| r * b);
    let values = if nu > 0.0 {
        let noise = Normal::new(0.0, nu).map_err(|e| Error::invalid("nu", e.to_string()))?;
        mixed.mapv(|v| sign(v + noise.sample(rng)))
    } else {
        mixed.mapv(sign)
    };
    NetworkState::new(values)
}

fn check_pair(patterns: &PatternSet, weights: &DualWeights, a: usize, b: usize) -> Result<()> {
    if weights.mode() != TrainingMode::Auto {
        return Err(Error::Config(format!(
            "morphing needs auto-associative weights, got {} mode",
            weights.mode()
        )));
    }
    weights.check_patterns(patterns)?;
    patterns.get(a)?;
    patterns.get(b)?;
    if a == b {
        return Err(Error::invalid("pattern pair", "A and B must differ"));
    }
    Ok(())
}

/// Relaxes morph states at every grid ratio and trial. Trial `t` at grid
/// index `k` draws its noise from the stream `(seed, "morph", [k, t])`.
pub fn morph_experiment(
    a: usize,
    b: usize,
    patterns: &PatternSet,
    weights: &DualWeights,
    cfg: &MorphConfig,
) -> Result<MorphResult> {
    cfg.validate()?;
    check_pair(patterns, weights, a, b)?;
    let (xi_a, xi_b) = (patterns.state(a), patterns.state(b));

    let points = cfg
        .ratio_grid
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let trials = (0..cfg.trials)
                .map(|t| {
                    let mut rng = stream(cfg.seed, "morph", &[k as u64, t as u64]);
                    let s0 = morph_state(&xi_a, &xi_b, r, cfg.nu, &mut rng)?;
                    let (end, status) = run_to_convergence(&s0, patterns, weights, cfg.max_steps)?;
                    Ok(MorphTrial {
                        overlap_a: overlap(&end, &xi_a)?,
                        overlap_b: overlap(&end, &xi_b)?,
                        status,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let (mean_a, std_a) = mean_std(trials.iter().map(|t| t.overlap_a));
            let (mean_b, std_b) = mean_std(trials.iter().map(|t| t.overlap_b));
            let (mean_steps, _) = mean_std(trials.iter().map(|t| t.status.steps as f64));
            let spurious = trials
                .iter()
                .filter(|t| t.best_overlap() < SPURIOUS_THRESHOLD)
                .count();
            let non_converged = trials
                .iter()
                .filter(|t| t.status.kind != RunKind::Converged)
                .count();
            Ok(MorphPoint {
                r,
                mean_overlap_a: mean_a,
                std_overlap_a: std_a,
                mean_overlap_b: mean_b,
                std_overlap_b: std_b,
                mean_steps,
                spurious_rate: spurious as f64 / trials.len() as f64,
                non_converged,
                trials,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(MorphResult { a, b, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlowdownPoint {
    pub r: f64,
    pub mean_steps: f64,
    pub non_converged: usize,
}

/// Mean convergence time along the morphing path.
pub fn slowdown_profile(
    a: usize,
    b: usize,
    patterns: &PatternSet,
    weights: &DualWeights,
    cfg: &MorphConfig,
) -> Result<Vec<SlowdownPoint>> {
    Ok(morph_experiment(a, b, patterns, weights, cfg)?
        .points
        .iter()
        .map(|p| SlowdownPoint {
            r: p.r,
            mean_steps: p.mean_steps,
            non_converged: p.non_converged,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialPoint {
    pub r: f64,
    pub u: f64,
}

/// `√N · v/‖v‖` with `v = (1−r)ξ^A + rξ^B`.
pub fn sphere_interpolation(
    xi_a: &NetworkState,
    xi_b: &NetworkState,
    r: f64,
) -> Result<Array1<f64>> {
    check_len("interpolation endpoint length", xi_a.len(), xi_b.len())?;
    let v = xi_a.view().mapv(|a| (1.0 - r) * a) + xi_b.view().mapv(|b| r * b);
    let norm = v.dot(&v).sqrt();
    if norm == 0.0 {
        return Err(Error::Singular { r });
    }
    let scale = (xi_a.len() as f64).sqrt() / norm;
    Ok(v.mapv(|x| x * scale))
}

/// Effective potential `U(r) = V(s̃(r))` on the sphere-projected path.
pub fn effective_potential_profile(
    a: usize,
    b: usize,
    patterns: &PatternSet,
    weights: &DualWeights,
    ratio_grid: &[f64],
) -> Result<Vec<PotentialPoint>> {
    weights.check_patterns(patterns)?;
    let (xi_a, xi_b) = (patterns.get(a)?, patterns.get(b)?);
    ratio_grid
        .iter()
        .map(|&r| {
            let s = sphere_interpolation(&xi_a, &xi_b, r)?;
            Ok(PotentialPoint {
                r,
                u: pseudo_energy(&s, patterns, weights)?,
            })
        })
        .collect()
}

/// `U(0.5) − min(U(0), U(1))`, interpolating `U(0.5)` linearly if 0.5 is not a
/// grid point.
pub fn barrier_height(profile: &[PotentialPoint]) -> Result<f64> {
    let (first, last) = match (profile.first(), profile.last()) {
        (Some(f), Some(l)) if f.r == 0.0 && l.r == 1.0 => (f, l),
        _ => return Err(Error::invalid("profile", "must span r = 0 to r = 1")),
    };
    let mid = match profile.iter().position(|p| p.r >= 0.5) {
        Some(k) if profile[k].r == 0.5 => profile[k].u,
        Some(k) => {
            let (lo, hi) = (&profile[k - 1], &profile[k]);
            lo.u + (hi.u - lo.u) * (0.5 - lo.r) / (hi.r - lo.r)
        }
        None => unreachable!("profile ends at r = 1"),
    };
    Ok(mid - first.u.min(last.u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair() -> (NetworkState, NetworkState) {
        let a = NetworkState::filled(8, 1.0).flipped(&[0, 3, 5]);
        let b = NetworkState::filled(8, 1.0).flipped(&[1, 3, 6, 7]);
        (a, b)
    }

    #[test]
    fn endpoints_without_noise_are_exact() {
        let (a, b) = pair();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(morph_state(&a, &b, 0.0, 0.0, &mut rng).unwrap(), a);
        assert_eq!(morph_state(&a, &b, 1.0, 0.0, &mut rng).unwrap(), b);
        assert!(morph_state(&a, &b, 1.5, 0.0, &mut rng).is_err());
        assert!(morph_state(&a, &b, 0.5, -1.0, &mut rng).is_err());
    }

    #[test]
    fn grid_validation() {
        assert_eq!(uniform_grid(3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(uniform_grid(101).unwrap().len(), 101);
        assert!(validate_grid(&[0.0, 0.6, 0.5, 1.0]).is_err());
        assert!(validate_grid(&[0.1, 1.0]).is_err());
        assert!(uniform_grid(1).is_err());
    }

    #[test]
    fn antipodal_midpoint_is_singular() {
        let (a, _) = pair();
        assert!(matches!(
            sphere_interpolation(&a, &a.negated(), 0.5),
            Err(Error::Singular { .. })
        ));
        let s = sphere_interpolation(&a, &a.negated(), 0.25).unwrap();
        assert!((s.dot(&s) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn morphing_rejects_bad_pairs() {
        let p = PatternSet::from_rows(&[[1i8, 1], [-1, 1]]).unwrap();
        let w = DualWeights::zeros(2, 2, KernelConfig::ridge(), TrainingMode::Auto);
        let cfg = MorphConfig::default();
        assert!(morph_experiment(0, 0, &p, &w, &cfg).is_err());
        assert!(morph_experiment(0, 2, &p, &w, &cfg).is_err());
        let seq = DualWeights::zeros(2, 2, KernelConfig::ridge(), TrainingMode::Sequence);
        assert!(matches!(
            morph_experiment(0, 1, &p, &seq, &cfg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn barrier_interpolates_midpoint() {
        let prof = [
            PotentialPoint { r: 0.0, u: -4.0 },
            PotentialPoint { r: 0.4, u: 0.0 },
            PotentialPoint { r: 0.6, u: 2.0 },
            PotentialPoint { r: 1.0, u: -3.0 },
        ];
        assert!((barrier_height(&prof).unwrap() - 5.0).abs() < 1e-12);
    }
}
