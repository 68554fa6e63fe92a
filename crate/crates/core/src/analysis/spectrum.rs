//! Gram spectrum and participation-ratio effective dimension.

use nalgebra::DMatrix;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

/// Relative (per pattern) tolerance under which negative eigenvalues of a
/// PSD matrix are treated as rounding error and clamped to zero.
pub const PSD_TOLERANCE: f64 = 1e-8;

const EIGEN_EPS: f64 = 1e-14;
const EIGEN_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    pub d_eff: f64,
    /// `2·D_eff`.
    pub cover_bound: f64,
}

impl SpectrumResult {
    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Result<Self> {
        let d_eff = participation_ratio(&eigenvalues)?;
        Ok(Self {
            eigenvalues,
            d_eff,
            cover_bound: 2.0 * d_eff,
        })
    }
}

/// Eigenvalues of a symmetric matrix, sorted descending. Values in
/// `[−1e−8·P, 0)` are clamped to zero.
pub fn eigen_spectrum(gram: &Array2<f64>) -> Result<Vec<f64>> {
    let p = gram.nrows();
    check_len("gram columns", p, gram.ncols())?;
    if p == 0 {
        return Err(Error::invalid("gram", "empty matrix"));
    }
    let m = DMatrix::from_fn(p, p, |i, j| gram[[i, j]]);
    let eig = m
        .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::Numeric(format!("symmetric eigensolver did not converge (P = {p})")))?;
    let floor = -PSD_TOLERANCE * p as f64;
    let mut values: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if (floor..0.0).contains(&l) { 0.0 } else { l })
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// `(Σλ)² / Σλ²`.
pub fn participation_ratio(eigenvalues: &[f64]) -> Result<f64> {
    let sum_sq: f64 = eigenvalues.iter().map(|l| l * l).sum();
    if sum_sq == 0.0 {
        return Err(Error::Undefined("participation ratio of an all-zero spectrum"));
    }
    let sum: f64 = eigenvalues.iter().sum();
    Ok(sum * sum / sum_sq)
}

/// Eigenvalues plus participation ratio of a Gram matrix.
pub fn gram_spectrum(gram: &Array2<f64>) -> Result<SpectrumResult> {
    SpectrumResult::from_eigenvalues(eigen_spectrum(gram)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_spectrum() {
        let s = eigen_spectrum(&Array2::eye(4)).unwrap();
        for l in s {
            assert_relative_eq!(l, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rank_one_ones() {
        let s = eigen_spectrum(&Array2::from_elem((3, 3), 1.0)).unwrap();
        assert_relative_eq!(s[0], 3.0, epsilon = 1e-12);
        assert!(s[1].abs() < 1e-12 && s[2].abs() < 1e-12);
        assert!(s.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn participation_ratio_cases() {
        assert_eq!(participation_ratio(&[2.0; 5]).unwrap(), 5.0);
        assert_eq!(participation_ratio(&[4.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(participation_ratio(&[2.0, 1.0, 1.0]).unwrap(), 16.0 / 6.0);
        assert!(matches!(
            participation_ratio(&[0.0, 0.0]),
            Err(Error::Undefined(_))
        ));
    }
}
