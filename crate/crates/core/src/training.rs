//! Per-neuron kernel logistic regression in dual form.
//!
//! Every neuron `i` is an independent binary classifier over the stored
//! patterns, sharing one Gram matrix `K`. With margins
//! `z_{μi} = y_{μi} (Kα)_{μi}` the loss is `c · Σ ln(1 + e^{−z})`, where `c` is
//! the [`LossNormalization`] factor. Optimisation is full-batch gradient
//! descent with decoupled weight decay:
//!
//! ```text
//! α ← α (1 − lr·wd) − lr ∇L(α)
//! ```
//!
//! starting from `α = 0` and running a fixed number of iterations.

use ndarray::{Array2, ArrayView2, Zip};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::kernel::{gram_matrix, KernelConfig};
use crate::model::{DualWeights, LossNormalization, TrainingMeta, TrainingMode};
use crate::pattern::PatternSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub mode: TrainingMode,
    pub learning_rate: f64,
    pub iterations: usize,
    pub weight_decay: f64,
    pub loss_normalization: LossNormalization,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            mode: TrainingMode::Auto,
            learning_rate: 0.1,
            iterations: 500,
            weight_decay: 0.01,
            loss_normalization: LossNormalization::Sum,
            seed: 0,
        }
    }
}

impl TrainingConfig {
    pub fn with_mode(mode: TrainingMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations > 0 && !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::invalid(
                "learning_rate",
                format!("must be > 0, got {}", self.learning_rate),
            ));
        }
        if !(self.weight_decay.is_finite() && self.weight_decay >= 0.0) {
            return Err(Error::invalid(
                "weight_decay",
                format!("must be >= 0, got {}", self.weight_decay),
            ));
        }
        Ok(())
    }

    fn meta(&self) -> TrainingMeta {
        TrainingMeta {
            learning_rate: self.learning_rate,
            iterations: self.iterations,
            weight_decay: self.weight_decay,
            loss_normalization: self.loss_normalization,
            seed: self.seed,
        }
    }
}

/// Desired outputs: row `μ` is the target for input `ξ^μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSet {
    y: Array2<f64>,
}

impl TargetSet {
    pub fn y(&self) -> ArrayView2<'_, f64> {
        self.y.view()
    }
}

/// Index of the pattern that input `mu` should map to.
pub fn target_index(mu: usize, p: usize, mode: TrainingMode) -> usize {
    match mode {
        TrainingMode::Auto => mu,
        TrainingMode::Sequence => (mu + 1) % p,
    }
}

pub fn build_targets(patterns: &PatternSet, mode: TrainingMode) -> TargetSet {
    let p = patterns.p();
    let idx: Vec<usize> = (0..p).map(|mu| target_index(mu, p, mode)).collect();
    TargetSet {
        y: patterns.data().select(ndarray::Axis(0), &idx),
    }
}

fn check_shapes(alpha: &Array2<f64>, gram: &Array2<f64>, targets: &TargetSet) -> Result<()> {
    let (p, n) = targets.y.dim();
    check_len("gram rows", p, gram.nrows())?;
    check_len("gram columns", p, gram.ncols())?;
    check_len("alpha rows", p, alpha.nrows())?;
    check_len("alpha columns", n, alpha.ncols())
}

/// `ln(1 + e^{−z})` without overflow.
#[inline]
fn softplus_neg(z: f64) -> f64 {
    if z > 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

/// `1 / (1 + e^{z})`.
#[inline]
fn sigmoid_neg(z: f64) -> f64 {
    if z >= 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

fn margins(alpha: &Array2<f64>, gram: &Array2<f64>, targets: &TargetSet) -> Array2<f64> {
    let mut z = gram.dot(alpha);
    z *= &targets.y;
    z
}

fn loss_from_margins(z: &Array2<f64>, norm: LossNormalization) -> f64 {
    let (p, n) = z.dim();
    let total: f64 = z.iter().map(|&z| softplus_neg(z)).sum();
    norm.factor(p, n) * total
}

/// `−c · K (y ⊙ σ(−z))`; `gram` is symmetric so `Kᵀ = K`.
fn gradient_from_margins(
    z: &Array2<f64>,
    gram: &Array2<f64>,
    targets: &TargetSet,
    norm: LossNormalization,
) -> Array2<f64> {
    let (p, n) = z.dim();
    let mut weighted = Array2::zeros((p, n));
    Zip::from(&mut weighted)
        .and(z)
        .and(&targets.y)
        .for_each(|w, &z, &y| *w = y * sigmoid_neg(z));
    let mut grad = gram.dot(&weighted);
    grad *= -norm.factor(p, n);
    grad
}

/// Summed (or mean) logistic loss on the margins. Excludes weight decay.
pub fn logistic_loss(
    alpha: &Array2<f64>,
    gram: &Array2<f64>,
    targets: &TargetSet,
    norm: LossNormalization,
) -> Result<f64> {
    check_shapes(alpha, gram, targets)?;
    Ok(loss_from_margins(&margins(alpha, gram, targets), norm))
}

/// Exact gradient of [`logistic_loss`] with respect to `α`.
pub fn loss_gradient(
    alpha: &Array2<f64>,
    gram: &Array2<f64>,
    targets: &TargetSet,
    norm: LossNormalization,
) -> Result<Array2<f64>> {
    check_shapes(alpha, gram, targets)?;
    let z = margins(alpha, gram, targets);
    Ok(gradient_from_margins(&z, gram, targets, norm))
}

/// Trains dual weights for `patterns`. Builds the Gram matrix internally.
pub fn train_klr(
    patterns: &PatternSet,
    cfg: &TrainingConfig,
    kernel: &KernelConfig,
) -> Result<DualWeights> {
    let gram = gram_matrix(patterns, kernel)?;
    train_klr_with_gram(patterns, &gram, cfg, kernel).map(|(w, _)| w)
}

/// Same as [`train_klr`] with a precomputed Gram matrix. Also returns the
/// loss trace: entry `t` is the loss before update `t + 1`, and the final
/// entry is the loss of the returned weights.
pub fn train_klr_with_gram(
    patterns: &PatternSet,
    gram: &Array2<f64>,
    cfg: &TrainingConfig,
    kernel: &KernelConfig,
) -> Result<(DualWeights, Vec<f64>)> {
    cfg.validate()?;
    let (p, n) = (patterns.p(), patterns.n());
    check_len("gram rows", p, gram.nrows())?;
    check_len("gram columns", p, gram.ncols())?;

    let targets = build_targets(patterns, cfg.mode);
    let norm = cfg.loss_normalization;
    let shrink = 1.0 - cfg.learning_rate * cfg.weight_decay;
    let mut alpha = Array2::<f64>::zeros((p, n));
    let mut trace = Vec::with_capacity(cfg.iterations + 1);

    for iteration in 0..=cfg.iterations {
        let z = margins(&alpha, gram, &targets);
        let loss = loss_from_margins(&z, norm);
        if !loss.is_finite() {
            return Err(Error::TrainingDiverged { iteration, loss });
        }
        trace.push(loss);
        if iteration == cfg.iterations {
            break;
        }
        let grad = gradient_from_margins(&z, gram, &targets, norm);
        let lr = cfg.learning_rate;
        Zip::from(&mut alpha)
            .and(&grad)
            .for_each(|a, &g| *a = *a * shrink - lr * g);
    }

    let weights = DualWeights::new(alpha, *kernel, cfg.mode, cfg.meta())?;
    Ok((weights, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tiny() -> PatternSet {
        PatternSet::from_rows(&[
            [1i8, -1, 1, 1, -1, 1, -1, -1],
            [1, 1, -1, 1, 1, -1, -1, 1],
            [-1, 1, 1, -1, 1, 1, -1, 1],
        ])
        .unwrap()
    }

    #[test]
    fn targets_by_mode() {
        let p = tiny();
        assert_eq!(build_targets(&p, TrainingMode::Auto).y(), p.data());
        let seq = build_targets(&p, TrainingMode::Sequence);
        assert_eq!(seq.y().row(0), p.pattern(1));
        assert_eq!(seq.y().row(1), p.pattern(2));
        assert_eq!(seq.y().row(2), p.pattern(0));

        let single = PatternSet::from_rows(&[[1i8, -1]]).unwrap();
        assert_eq!(
            build_targets(&single, TrainingMode::Sequence).y(),
            single.data()
        );
    }

    #[test]
    fn zero_alpha_loss_is_ln2() {
        let p = tiny();
        let gram = gram_matrix(&p, &KernelConfig::ridge()).unwrap();
        let t = build_targets(&p, TrainingMode::Auto);
        let a = Array2::zeros((3, 8));
        let mean = logistic_loss(&a, &gram, &t, LossNormalization::Mean).unwrap();
        assert_relative_eq!(mean, std::f64::consts::LN_2, max_relative = 1e-14);
        let sum = logistic_loss(&a, &gram, &t, LossNormalization::Sum).unwrap();
        assert_relative_eq!(sum, 24.0 * std::f64::consts::LN_2, max_relative = 1e-14);
    }

    #[test]
    fn saturated_margins_have_negligible_loss() {
        // With K ≈ I (very local kernel), α = 40 y gives margins ≈ 40.
        let p = tiny();
        let gram = gram_matrix(&p, &KernelConfig::new(50.0).unwrap()).unwrap();
        let t = build_targets(&p, TrainingMode::Auto);
        let a = t.y().mapv(|y| 40.0 * y);
        let loss = logistic_loss(&a, &gram, &t, LossNormalization::Mean).unwrap();
        assert!(loss < 1e-12, "loss {loss}");
    }

    #[test]
    fn stable_helpers_at_extremes() {
        assert_eq!(softplus_neg(1000.0), 0.0);
        assert_relative_eq!(softplus_neg(-1000.0), 1000.0);
        assert_eq!(sigmoid_neg(0.0), 0.5);
        assert_eq!(sigmoid_neg(1000.0), 0.0);
        assert_eq!(sigmoid_neg(-1000.0), 1.0);
    }

    #[test]
    fn zero_iterations_leave_alpha_zero() {
        let cfg = TrainingConfig {
            iterations: 0,
            ..TrainingConfig::default()
        };
        let w = train_klr(&tiny(), &cfg, &KernelConfig::ridge()).unwrap();
        assert!(w.alpha().iter().all(|&a| a == 0.0));
        assert_eq!(w.meta().iterations, 0);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = TrainingConfig {
            learning_rate: 0.0,
            ..TrainingConfig::default()
        };
        assert!(train_klr(&tiny(), &cfg, &KernelConfig::ridge()).is_err());
        let cfg = TrainingConfig {
            weight_decay: -1.0,
            ..TrainingConfig::default()
        };
        assert!(train_klr(&tiny(), &cfg, &KernelConfig::ridge()).is_err());
    }

    #[test]
    fn divergence_names_the_iteration() {
        let cfg = TrainingConfig {
            learning_rate: 1e308,
            iterations: 5,
            ..TrainingConfig::default()
        };
        match train_klr(&tiny(), &cfg, &KernelConfig::new(0.01).unwrap()) {
            Err(Error::TrainingDiverged { iteration, .. }) => assert!(iteration >= 1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}
