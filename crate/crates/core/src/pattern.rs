//! Bipolar pattern sets and network states.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{check_len, Error, Result};

/// Sign with the `sign(0) = +1` convention used everywhere in the crate.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn is_bipolar(x: f64) -> bool {
    x == 1.0 || x == -1.0
}

/// `P` stored patterns of dimension `N`, one per row, entries exactly ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSet {
    data: Array2<f64>,
}

impl PatternSet {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        let (p, n) = data.dim();
        if p == 0 || n == 0 {
            return Err(Error::invalid(
                "patterns",
                format!("need at least one pattern and one neuron, got {p}x{n}"),
            ));
        }
        if let Some(((mu, i), v)) = data.indexed_iter().find(|(_, v)| !is_bipolar(**v)) {
            return Err(Error::invalid(
                "patterns",
                format!("entry ({mu}, {i}) is {v}, expected -1 or +1"),
            ));
        }
        Ok(Self { data })
    }

    /// Builds a set from integer rows (each entry must be ±1).
    pub fn from_rows<R: AsRef<[i8]>>(rows: &[R]) -> Result<Self> {
        let p = rows.len();
        let n = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Array2::zeros((p, n));
        for (mu, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            check_len("pattern row length", n, row.len())?;
            for (i, &v) in row.iter().enumerate() {
                data[[mu, i]] = f64::from(v);
            }
        }
        Self::new(data)
    }

    /// Neuron count `N`.
    pub fn n(&self) -> usize {
        self.data.ncols()
    }

    /// Pattern count `P`.
    pub fn p(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> ArrayView2<'_, f64> {
        self.data.view()
    }

    pub fn pattern(&self, mu: usize) -> ArrayView1<'_, f64> {
        self.data.row(mu)
    }

    /// Copy of pattern `mu` as a network state.
    pub fn state(&self, mu: usize) -> NetworkState {
        NetworkState(self.data.row(mu).to_owned())
    }

    pub fn get(&self, mu: usize) -> Result<NetworkState> {
        if mu < self.p() {
            Ok(self.state(mu))
        } else {
            Err(Error::invalid(
                "pattern index",
                format!("{mu} out of range for {} patterns", self.p()),
            ))
        }
    }

    /// Rows selected by `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&mu| mu >= self.p()) {
            return Err(Error::invalid(
                "subset index",
                format!("{bad} out of range for {} patterns", self.p()),
            ));
        }
        Self::new(self.data.select(Axis(0), indices))
    }

    /// Integer view of the rows, used by the file formats.
    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.data
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|&v| v as i8).collect())
            .collect()
    }
}

/// One bipolar network state `s ∈ {-1,+1}^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState(Array1<f64>);

impl NetworkState {
    pub fn new(values: Array1<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("state", "empty state vector"));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !is_bipolar(**v)) {
            return Err(Error::invalid(
                "state",
                format!("entry {i} is {v}, expected -1 or +1"),
            ));
        }
        Ok(Self(values))
    }

    /// Elementwise [`sign`] of an arbitrary real vector.
    pub fn from_signs(values: ArrayView1<'_, f64>) -> Self {
        Self(values.mapv(sign))
    }

    pub fn filled(n: usize, value: f64) -> Self {
        Self(Array1::from_elem(n, sign(value)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_array(&self) -> &Array1<f64> {
        &self.0
    }

    pub fn view(&self) -> ArrayView1<'_, f64> {
        self.0.view()
    }

    pub fn into_inner(self) -> Array1<f64> {
        self.0
    }

    /// Copy with the bits at `indices` flipped.
    pub fn flipped(&self, indices: &[usize]) -> Self {
        let mut out = self.0.clone();
        for &i in indices {
            out[i] = -out[i];
        }
        Self(out)
    }

    pub fn negated(&self) -> Self {
        Self(-&self.0)
    }

    /// Number of positions where the two states differ.
    pub fn hamming(&self, other: &NetworkState) -> Result<usize> {
        check_len("state length", self.len(), other.len())?;
        Ok(self
            .0
            .iter()
            .zip(other.0.iter())
            .filter(|(a, b)| a != b)
            .count())
    }
}

/// A probe point for kernel evaluation.
///
/// Bipolar probes use the `‖x−y‖² = 2(N − x·y)` identity; continuous probes
/// take the squared Euclidean distance directly.
#[derive(Debug, Clone, Copy)]
pub enum Probe<'a> {
    Bipolar(ArrayView1<'a, f64>),
    Continuous(ArrayView1<'a, f64>),
}

impl<'a> Probe<'a> {
    pub fn view(&self) -> ArrayView1<'a, f64> {
        match *self {
            Probe::Bipolar(v) | Probe::Continuous(v) => v,
        }
    }

    pub fn len(&self) -> usize {
        self.view().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_bipolar(&self) -> bool {
        matches!(self, Probe::Bipolar(_))
    }
}

impl<'a> From<&'a NetworkState> for Probe<'a> {
    fn from(s: &'a NetworkState) -> Self {
        Probe::Bipolar(s.view())
    }
}

impl<'a> From<&'a Array1<f64>> for Probe<'a> {
    fn from(s: &'a Array1<f64>) -> Self {
        Probe::Continuous(s.view())
    }
}

impl<'a> From<ArrayView1<'a, f64>> for Probe<'a> {
    fn from(s: ArrayView1<'a, f64>) -> Self {
        Probe::Continuous(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn rejects_non_bipolar_entries() {
        assert!(PatternSet::new(array![[1.0, 0.0]]).is_err());
        assert!(PatternSet::new(Array2::zeros((0, 3))).is_err());
        assert!(NetworkState::new(array![1.0, 0.5]).is_err());
        assert!(PatternSet::new(array![[1.0, -1.0], [-1.0, -1.0]]).is_ok());
    }

    #[test]
    fn sign_zero_is_positive() {
        assert_eq!(sign(0.0), 1.0);
        assert_eq!(sign(-0.0), 1.0);
        assert_eq!(sign(-1e-300), -1.0);
    }

    #[test]
    fn flipping_and_hamming() {
        let s = NetworkState::filled(6, 1.0);
        let t = s.flipped(&[1, 4]);
        assert_eq!(s.hamming(&t).unwrap(), 2);
        assert_eq!(t.as_array()[1], -1.0);
    }

    #[test]
    fn subset_keeps_order() {
        let p = PatternSet::from_rows(&[[1i8, 1], [-1, 1], [-1, -1]]).unwrap();
        let s = p.subset(&[2, 0]).unwrap();
        assert_eq!(s.to_rows(), vec![vec![-1, -1], vec![1, 1]]);
        assert!(p.subset(&[3]).is_err());
    }
}
