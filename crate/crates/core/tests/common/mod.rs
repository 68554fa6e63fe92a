//! Independent scalar oracles shared by the test targets.
#![allow(dead_code)]

use klr_hopfield::model::LossNormalization;
use klr_hopfield::training::target_index;
use klr_hopfield::{PatternSet, TrainingMode};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn random_alpha(p: usize, n: usize, scale: f64, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_fn((p, n), |_| scale * rng.sample::<f64, _>(StandardNormal))
}

pub fn scalar_kernel(x: &[f64], y: &[f64], gamma: f64) -> f64 {
    let mut d = 0.0;
    for i in 0..x.len() {
        d += (x[i] - y[i]) * (x[i] - y[i]);
    }
    (-gamma * d).exp()
}

pub fn row(p: &PatternSet, mu: usize) -> Vec<f64> {
    p.pattern(mu).to_vec()
}

pub fn scalar_field(s: &[f64], p: &PatternSet, alpha: &Array2<f64>, gamma: f64) -> Vec<f64> {
    let mut h = vec![0.0; p.n()];
    for (i, hi) in h.iter_mut().enumerate() {
        for mu in 0..p.p() {
            *hi += alpha[[mu, i]] * scalar_kernel(s, &row(p, mu), gamma);
        }
    }
    h
}

pub fn scalar_loss(p: &PatternSet, alpha: &Array2<f64>, gamma: f64, mode: TrainingMode, norm: LossNormalization) -> f64 {
    let (pc, n) = (p.p(), p.n());
    let mut total = 0.0;
    for mu in 0..pc {
        let target = row(p, target_index(mu, pc, mode));
        for i in 0..n {
            let mut f = 0.0;
            for nu in 0..pc {
                f += alpha[[nu, i]] * scalar_kernel(&row(p, mu), &row(p, nu), gamma);
            }
            total += (1.0 + (-target[i] * f).exp()).ln();
        }
    }
    total * norm.factor(pc, n)
}

pub fn scalar_snr(p: &PatternSet, alpha: &Array2<f64>, gamma: f64, mode: TrainingMode) -> (f64, f64) {
    let (pc, n) = (p.p(), p.n());
    let mut signal = Vec::new();
    let mut noise = Vec::new();
    for mu in 0..pc {
        let target = row(p, target_index(mu, pc, mode));
        for i in 0..n {
            signal.push(target[i] * alpha[[mu, i]] * scalar_kernel(&row(p, mu), &row(p, mu), gamma));
            let mut c = 0.0;
            for nu in 0..pc {
                if nu != mu {
                    c += alpha[[nu, i]] * scalar_kernel(&row(p, mu), &row(p, nu), gamma);
                }
            }
            noise.push(target[i] * c);
        }
    }
    let s = signal.iter().sum::<f64>() / signal.len() as f64;
    let m = noise.iter().sum::<f64>() / noise.len() as f64;
    let var = noise.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / noise.len() as f64;
    (s, var.sqrt())
}

pub fn jacobi_eigenvalues(mut a: Array2<f64>) -> Vec<f64> {
    let n = a.nrows();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[[i, j]] * a[[i, j]])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[[p, q]].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * a[[p, q]]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[[k, p]], a[[k, q]]);
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[[p, k]], a[[q, k]]);
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[[i, i]]).collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    ev
}
