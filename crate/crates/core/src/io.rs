//! File formats: matrix JSON `{"d", "rows"}`, header-free CSV matrices, and
//! format sniffing for the command-line entry points.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad matrix shape: {0}")]
    Shape(String),
    #[error("non-numeric CSV field {field:?} on row {row}")]
    Number { row: usize, field: String },
}

/// Wire form of a dense matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub rows: Vec<Vec<f64>>,
}

impl From<&DMatrix<f64>> for MatrixJson {
    fn from(m: &DMatrix<f64>) -> Self {
        MatrixJson {
            d: m.nrows(),
            rows: m.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }
}

impl MatrixJson {
    /// Checks that `rows` is `d × d`.
    pub fn into_matrix(self) -> Result<DMatrix<f64>, IoError> {
        if self.rows.len() != self.d {
            return Err(IoError::Shape(format!(
                "d = {} but {} rows given",
                self.d,
                self.rows.len()
            )));
        }
        if let Some((i, r)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != self.d) {
            return Err(IoError::Shape(format!(
                "row {} has {} entries, expected {}",
                i + 1,
                r.len(),
                self.d
            )));
        }
        let d = self.d;
        Ok(DMatrix::from_fn(d, d, |i, j| self.rows[i][j]))
    }
}

/// Parses a header-free CSV matrix; every row must have the same length.
pub fn parse_csv_matrix(text: &str) -> Result<DMatrix<f64>, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| IoError::Number {
                    row: r + 1,
                    field: f.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(IoError::Shape("ragged CSV rows".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

/// Header-free CSV with shortest round-trip float formatting.
pub fn to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for r in m.row_iter() {
        let line: Vec<String> = r.iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a matrix from JSON (`{"d", "rows"}`) or CSV, deciding by the first
/// non-blank character.
pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>, IoError> {
    parse_matrix(&read_text(path)?)
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>, IoError> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str::<MatrixJson>(text)?.into_matrix()
    } else {
        parse_csv_matrix(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_agree() {
        let a = parse_matrix("0, 9, 25\n9, 0, 16\n25, 16, 0\n").unwrap();
        let b = parse_matrix(r#"{"d":3,"rows":[[0,9,25],[9,0,16],[25,16,0]]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_csv_matrix(&to_csv(&a)).unwrap(), a);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            parse_matrix(r#"{"d":2,"rows":[[0,1]]}"#),
            Err(IoError::Shape(_))
        ));
        assert!(parse_csv_matrix("1,2\n3\n").is_err());
        assert!(matches!(parse_csv_matrix("1,x\n"), Err(IoError::Number { row: 1, .. })));
    }

    #[test]
    fn float_formatting_round_trips() {
        let m = DMatrix::from_row_slice(1, 2, &[0.1 + 0.2, 1.0 / 3.0]);
        assert_eq!(parse_csv_matrix(&to_csv(&m)).unwrap(), m);
    }
}
