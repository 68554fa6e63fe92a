//! RBF kernel evaluation and Gram matrices.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::pattern::{PatternSet, Probe};

/// Largest pattern count for which a dense Gram matrix is built (~3 GB of f64).
pub const MAX_GRAM_PATTERNS: usize = 20_000;

/// Locality parameter of `K(x, y) = exp(-γ‖x − y‖²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    gamma: f64,
}

impl KernelConfig {
    /// The "Ridge" regime used by default.
    pub const RIDGE_GAMMA: f64 = 0.02;
    /// Strongly local contrast regime.
    pub const LOCAL_GAMMA: f64 = 5.0;

    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::invalid(
                "gamma",
                format!("must be finite and > 0, got {gamma}"),
            ))
        }
    }

    pub fn ridge() -> Self {
        Self {
            gamma: Self::RIDGE_GAMMA,
        }
    }

    pub fn local() -> Self {
        Self {
            gamma: Self::LOCAL_GAMMA,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    #[inline]
    pub fn eval_sq_dist(&self, sq_dist: f64) -> f64 {
        (-self.gamma * sq_dist).exp()
    }
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self::ridge()
    }
}

fn sq_dist(x: &Probe<'_>, y: &Probe<'_>) -> f64 {
    let (xv, yv) = (x.view(), y.view());
    if x.is_bipolar() && y.is_bipolar() {
        2.0 * (xv.len() as f64 - xv.dot(&yv))
    } else {
        xv.iter()
            .zip(yv.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// `exp(-γ‖x − y‖²)`.
pub fn rbf_kernel<'a, 'b>(
    x: impl Into<Probe<'a>>,
    y: impl Into<Probe<'b>>,
    cfg: &KernelConfig,
) -> Result<f64> {
    let (x, y) = (x.into(), y.into());
    check_len("kernel argument length", x.len(), y.len())?;
    Ok(cfg.eval_sq_dist(sq_dist(&x, &y)))
}

/// Kernel values `K(s, ξ^μ)` against every stored pattern.
pub fn kernel_row<'a>(
    s: impl Into<Probe<'a>>,
    patterns: &PatternSet,
    cfg: &KernelConfig,
) -> Result<Array1<f64>> {
    let s = s.into();
    check_len("state length", patterns.n(), s.len())?;
    let xs = patterns.data();
    let row = match s {
        Probe::Bipolar(v) => {
            let n = patterns.n() as f64;
            xs.dot(&v).mapv(|dot| cfg.eval_sq_dist(2.0 * (n - dot)))
        }
        Probe::Continuous(v) => Array1::from_iter(xs.rows().into_iter().map(|xi| {
            let d: f64 = xi
                .iter()
                .zip(v.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            cfg.eval_sq_dist(d)
        })),
    };
    Ok(row)
}

/// `P×P` matrix of pairwise kernel values between stored patterns.
pub fn gram_matrix(patterns: &PatternSet, cfg: &KernelConfig) -> Result<Array2<f64>> {
    let p = patterns.p();
    if p > MAX_GRAM_PATTERNS {
        return Err(Error::TooLarge {
            p,
            limit: MAX_GRAM_PATTERNS,
        });
    }
    let xs = patterns.data();
    let n = patterns.n() as f64;
    // Inner products of ±1 vectors are small integers, so this is exact and symmetric.
    let mut gram = xs.dot(&xs.t());
    gram.mapv_inplace(|dot| cfg.eval_sq_dist(2.0 * (n - dot)));
    Ok(gram)
}
