//! CSV tables with fixed headers.
//!
//! Floats are written in shortest round-trip form; non-finite or undefined
//! values use the tokens `inf`, `-inf` and `nan`.

use std::fs;
use std::path::Path;

use crate::analysis::cover::CoverRow;
use crate::analysis::morph::{MorphResult, PotentialPoint, SlowdownPoint};
use crate::analysis::spectrum::SpectrumResult;
use crate::dynamics::{RecallTrial, SequenceRunResult};
use crate::error::{Error, Result};
use crate::harness::sweep::{CapacityResult, SnrRow};

pub const SEQUENCE_HEADER: &[&str] = &["step", "target_overlap"];
pub const MORPH_HEADER: &[&str] = &[
    "r",
    "mean_overlap_a",
    "std_overlap_a",
    "mean_overlap_b",
    "std_overlap_b",
    "mean_steps",
    "spurious_rate",
];
pub const POTENTIAL_HEADER: &[&str] = &["r", "U"];
pub const SNR_HEADER: &[&str] = &["P", "S", "sigma", "snr"];
pub const COVER_HEADER: &[&str] = &["P", "d_eff", "cover_bound", "accuracy"];
pub const CAPACITY_HEADER: &[&str] = &["P", "trials", "successes", "p_c_flag"];
pub const RECALL_HEADER: &[&str] = &["pattern", "trial", "success", "final_overlap", "steps"];
pub const SLOWDOWN_HEADER: &[&str] = &["r", "mean_steps", "non_converged"];
pub const EFFDIM_HEADER: &[&str] = &["P", "d_eff", "cover_bound"];
pub const EIGENVALUES_HEADER: &[&str] = &["k", "lambda"];

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:?}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_else(|| "nan".into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

pub fn sequence_table(run: &SequenceRunResult) -> Table {
    let mut t = Table::new(SEQUENCE_HEADER);
    for (k, m) in run.target_overlap_trace.iter().enumerate() {
        t.push(vec![(k + 1).to_string(), fmt_f64(*m)]);
    }
    t
}

pub fn morph_table(result: &MorphResult) -> Table {
    let mut t = Table::new(MORPH_HEADER);
    for p in &result.points {
        t.push(vec![
            fmt_f64(p.r),
            fmt_f64(p.mean_overlap_a),
            fmt_f64(p.std_overlap_a),
            fmt_f64(p.mean_overlap_b),
            fmt_f64(p.std_overlap_b),
            fmt_f64(p.mean_steps),
            fmt_f64(p.spurious_rate),
        ]);
    }
    t
}

pub fn potential_table(profile: &[PotentialPoint]) -> Table {
    let mut t = Table::new(POTENTIAL_HEADER);
    for p in profile {
        t.push(vec![fmt_f64(p.r), fmt_f64(p.u)]);
    }
    t
}

pub fn slowdown_table(profile: &[SlowdownPoint]) -> Table {
    let mut t = Table::new(SLOWDOWN_HEADER);
    for p in profile {
        t.push(vec![
            fmt_f64(p.r),
            fmt_f64(p.mean_steps),
            p.non_converged.to_string(),
        ]);
    }
    t
}

pub fn snr_table(rows: &[SnrRow]) -> Table {
    let mut t = Table::new(SNR_HEADER);
    for r in rows {
        t.push(vec![
            r.p.to_string(),
            fmt_f64(r.signal_mean),
            fmt_f64(r.noise_std),
            fmt_opt(r.snr),
        ]);
    }
    t
}

pub fn cover_table(rows: &[CoverRow]) -> Table {
    let mut t = Table::new(COVER_HEADER);
    for r in rows {
        t.push(vec![
            r.p.to_string(),
            fmt_f64(r.d_eff),
            fmt_f64(r.cover_bound),
            fmt_f64(r.accuracy),
        ]);
    }
    t
}

pub fn capacity_table(result: &CapacityResult) -> Table {
    let mut t = Table::new(CAPACITY_HEADER);
    for r in &result.rows {
        let flag = if result.p_c == Some(r.p) { "1" } else { "0" };
        t.push(vec![
            r.p.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            flag.to_string(),
        ]);
    }
    t
}

pub fn recall_table(per_pattern: &[(usize, Vec<RecallTrial>)]) -> Table {
    let mut t = Table::new(RECALL_HEADER);
    for (mu, trials) in per_pattern {
        for (k, trial) in trials.iter().enumerate() {
            t.push(vec![
                mu.to_string(),
                k.to_string(),
                u8::from(trial.success).to_string(),
                fmt_f64(trial.final_overlap),
                trial.status.steps.to_string(),
            ]);
        }
    }
    t
}

pub fn effdim_table(p: usize, spectrum: &SpectrumResult) -> Table {
    let mut t = Table::new(EFFDIM_HEADER);
    t.push(vec![
        p.to_string(),
        fmt_f64(spectrum.d_eff),
        fmt_f64(spectrum.cover_bound),
    ]);
    t
}

pub fn eigenvalues_table(spectrum: &SpectrumResult) -> Table {
    let mut t = Table::new(EIGENVALUES_HEADER);
    for (k, l) in spectrum.eigenvalues.iter().enumerate() {
        t.push(vec![(k + 1).to_string(), fmt_f64(*l)]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_tokens() {
        assert_eq!(fmt_f64(1.0), "1.0");
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(f64::NAN), "nan");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_f64(1e-300).parse::<f64>().unwrap(), 1e-300);
        assert!(fmt_f64(1e-300).len() < 10);
    }

    #[test]
    fn snr_header_and_undefined_token() {
        let t = snr_table(&[SnrRow {
            p: 1,
            signal_mean: 0.5,
            noise_std: 0.0,
            snr: None,
        }]);
        assert_eq!(t.to_csv(), "P,S,sigma,snr\n1,0.5,0.0,nan\n");
    }
}
