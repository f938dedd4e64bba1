//! CSV datasets and per-node score dumps.
//!
//! Dataset files have a header row and one sample per row. The label
//! column (default `label`) holds class ids `0..C`; every other column is a
//! feature unless an explicit feature list is given.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use gssl_core::algorithms::PredictionVector;
use gssl_core::Dataset;

use crate::error::{Error, Result};

pub const DEFAULT_LABEL_COLUMN: &str = "label";

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string())
}

pub fn load_csv(path: &Path, features: Option<&[String]>, label_column: &str) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let schema = |message: String| Error::Schema {
        path: path.to_path_buf(),
        message,
    };
    let headers = reader
        .headers()
        .map_err(|e| schema(format!("cannot read header: {e}")))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let label_idx = column(label_column).ok_or_else(|| schema(format!("missing label column '{label_column}'")))?;
    let feature_idx: Vec<usize> = match features {
        Some(names) => names
            .iter()
            .map(|n| column(n).ok_or_else(|| schema(format!("missing feature column '{n}'"))))
            .collect::<Result<_>>()?,
        None => (0..headers.len()).filter(|&i| i != label_idx).collect(),
    };
    if feature_idx.is_empty() {
        return Err(schema("no feature columns".to_string()));
    }

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        for &c in &feature_idx {
            let cell = record.get(c).unwrap_or("").trim();
            let x: f64 = cell
                .parse()
                .map_err(|_| bad(format!("column '{}': cannot parse '{cell}' as a number", &headers[c])))?;
            if !x.is_finite() {
                return Err(bad(format!("column '{}': non-finite value '{cell}'", &headers[c])));
            }
            values.push(x);
        }
        let cell = record.get(label_idx).unwrap_or("").trim();
        let y: usize = cell
            .parse()
            .map_err(|_| bad(format!("label '{cell}' is not a class id")))?;
        labels.push(y);
    }
    let n = labels.len();
    Ok(Dataset::new(dataset_name(path), n, feature_idx.len(), values, Some(labels))?)
}

/// Writes `f0..f{d-1}` plus `label` (when present). Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_csv(data: &Dataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let wrap = |e: csv::Error| Error::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut header: Vec<String> = (0..data.dim()).map(|j| format!("f{j}")).collect();
    if data.labels().is_some() {
        header.push(DEFAULT_LABEL_COLUMN.to_string());
    }
    w.write_record(&header).map_err(wrap)?;
    let mut row = Vec::with_capacity(header.len());
    for i in 0..data.len() {
        row.clear();
        row.extend(data.row(i).iter().map(|x| x.to_string()));
        if let Some(labels) = data.labels() {
            row.push(labels[i].to_string());
        }
        w.write_record(&row).map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `node,score,hard_label`, one row per node.
pub fn write_scores(pred: &PredictionVector, path: &Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
    let io = |e| Error::io(path, e);
    writeln!(file, "node,score,hard_label").map_err(io)?;
    for (i, (s, y)) in pred.scores.iter().zip(&pred.hard_labels).enumerate() {
        writeln!(file, "{i},{s},{y}").map_err(io)?;
    }
    file.flush().map_err(io)
}
