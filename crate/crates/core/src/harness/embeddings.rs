//! Real-valued embedding files and their binarisation into patterns.
//!
//! The embedding CSV has one vector per row. An optional first line of
//! non-numeric column names is accepted as a header; it must have as many
//! fields as the data rows. When `<stem>.meta.json` exists its declared
//! `(p, d)` must match the body.

use std::path::{Path, PathBuf};

use ndarray::{Array2, Axis};

use crate::error::{Error, Result};
use crate::harness::patterns::{meta_path, read_meta};
use crate::pattern::{sign, PatternSet};

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    pub data: Array2<f64>,
    pub source: Option<PathBuf>,
}

impl EmbeddingSet {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        if data.ncols() == 0 || data.nrows() == 0 {
            return Err(Error::invalid("embeddings", "need at least one row and one column"));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("embeddings", "all entries must be finite"));
        }
        Ok(Self { data, source: None })
    }

    pub fn p(&self) -> usize {
        self.data.nrows()
    }

    pub fn d(&self) -> usize {
        self.data.ncols()
    }
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        location: Some(format!("line {line}")),
        message: message.into(),
    }
}

/// Parses a headerless-or-headed numeric CSV into a row-major matrix.
pub(crate) fn read_numeric_csv(path: &Path) -> Result<Array2<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::Parse {
                path: path.to_path_buf(),
                location: None,
                message: format!("{other:?}"),
            },
        })?;

    let mut values: Vec<f64> = Vec::new();
    let mut width: Option<usize> = None;
    let mut header_width: Option<usize> = None;
    let mut rows = 0usize;

    for (k, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(k as u64 + 1);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(|f| f.parse::<f64>()).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if k == 0 => {
                header_width = Some(record.len());
                continue;
            }
            Err(_) => {
                let (col, field) = record
                    .iter()
                    .enumerate()
                    .find(|(_, f)| f.parse::<f64>().is_err())
                    .expect("some field failed to parse");
                return Err(parse_err(
                    path,
                    line,
                    format!("field {} ('{field}') is not a number", col + 1),
                ));
            }
        };
        if let Some((col, v)) = row.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(parse_err(
                path,
                line,
                format!("field {} is not finite ({v})", col + 1),
            ));
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(
                    path,
                    line,
                    format!("row has {} fields, expected {w}", row.len()),
                ));
            }
            _ => {}
        }
        values.extend(row);
        rows += 1;
    }

    let width = width.ok_or_else(|| Error::Parse {
        path: path.to_path_buf(),
        location: None,
        message: "file contains no data rows".into(),
    })?;
    if let Some(h) = header_width {
        if h != width {
            return Err(parse_err(
                path,
                1,
                format!("malformed header: {h} names for {width} columns"),
            ));
        }
    }
    Ok(Array2::from_shape_vec((rows, width), values).expect("row-major shape"))
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingSet> {
    let data = read_numeric_csv(path)?;
    if let Some(meta) = read_meta(path)? {
        if meta.p != data.nrows() || meta.d != data.ncols() {
            return Err(Error::Parse {
                path: meta_path(path),
                location: None,
                message: format!(
                    "sidecar declares {}x{}, file holds {}x{}",
                    meta.p,
                    meta.d,
                    data.nrows(),
                    data.ncols()
                ),
            });
        }
    }
    let mut set = EmbeddingSet::new(data)?;
    set.source = Some(path.to_path_buf());
    Ok(set)
}

/// Per-dimension means over all rows.
pub fn column_means(emb: &EmbeddingSet) -> ndarray::Array1<f64> {
    emb.data.mean_axis(Axis(0)).expect("non-empty")
}

/// Centres every dimension on its mean over the rows, then takes the sign
/// (`sign(0) = +1`).
pub fn binarize_embeddings(emb: &EmbeddingSet) -> Result<PatternSet> {
    if emb.p() < 2 {
        return Err(Error::invalid("embeddings", "centring needs at least two rows"));
    }
    let means = column_means(emb);
    let centred = &emb.data - &means.insert_axis(Axis(0));
    PatternSet::new(centred.mapv(sign))
}
