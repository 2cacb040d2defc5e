//! Numeric CSV input and output.
//!
//! Files are UTF-8, comma-delimited, with an optional single header row. The
//! first row is a header when none of its cells parses as a number. Rows and
//! columns in error messages are 1-based file positions.

use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::matrix::Matrix;
use crate::ml::LabeledDataset;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{path}: cannot read file: {message}")]
    Io { path: PathBuf, message: String },

    #[error("{path}: file contains no data rows")]
    EmptyFile { path: PathBuf },

    #[error("{path}: row {row} has {found} columns, expected {expected}")]
    RaggedRows {
        path: PathBuf,
        row: u64,
        expected: usize,
        found: usize,
    },

    #[error("{path}: row {row}, column {col}: {value:?} is not a finite number")]
    NonNumericCell {
        path: PathBuf,
        row: u64,
        col: usize,
        value: String,
    },

    #[error("{path}: label column {column} not found")]
    MissingLabelColumn { path: PathBuf, column: String },

    #[error("{path}: duplicate column name {name:?}")]
    DuplicateColumn { path: PathBuf, name: String },

    #[error("{path}: malformed CSV: {message}")]
    Malformed { path: PathBuf, message: String },
}

/// Label column selector: a header name or a 0-based column index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
    Last,
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

impl std::fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LabelColumn::Name(n) => write!(f, "{n:?}"),
            LabelColumn::Index(i) => write!(f, "{i}"),
            LabelColumn::Last => f.write_str("(last)"),
        }
    }
}

struct Table {
    header: Option<Vec<String>>,
    /// (file line, cells)
    rows: Vec<(u64, Vec<String>)>,
}

fn parse_number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn read_table(path: &Path) -> Result<Table, ParseError> {
    let bytes = std::fs::read(path).map_err(|e| ParseError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    read_table_from(path, &bytes)
}

fn read_table_from(path: &Path, bytes: &[u8]) -> Result<Table, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| ParseError::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        rows.push((line, rec.iter().map(str::to_string).collect::<Vec<_>>()));
    }
    if rows.is_empty() {
        return Err(ParseError::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    let header = if rows[0].1.iter().all(|c| parse_number(c).is_none()) {
        Some(rows.remove(0).1)
    } else {
        None
    };
    if rows.is_empty() {
        return Err(ParseError::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    let expected = header.as_ref().map_or(rows[0].1.len(), Vec::len);
    for (line, cells) in &rows {
        if cells.len() != expected {
            return Err(ParseError::RaggedRows {
                path: path.to_path_buf(),
                row: *line,
                expected,
                found: cells.len(),
            });
        }
    }
    if let Some(h) = &header {
        let mut seen = HashSet::new();
        for name in h {
            if !seen.insert(name.as_str()) {
                return Err(ParseError::DuplicateColumn {
                    path: path.to_path_buf(),
                    name: name.clone(),
                });
            }
        }
    }
    Ok(Table { header, rows })
}

fn numeric_cell(path: &Path, line: u64, col: usize, cell: &str) -> Result<f64, ParseError> {
    parse_number(cell).ok_or_else(|| ParseError::NonNumericCell {
        path: path.to_path_buf(),
        row: line,
        col: col + 1,
        value: cell.to_string(),
    })
}

/// A numeric matrix with one matrix row per file row.
pub fn parse_matrix_csv(path: &Path) -> Result<Matrix, ParseError> {
    let table = read_table(path)?;
    matrix_from_table(path, &table)
}

fn matrix_from_table(path: &Path, table: &Table) -> Result<Matrix, ParseError> {
    let cols = table.rows[0].1.len();
    let mut data = Vec::with_capacity(table.rows.len() * cols);
    for (line, cells) in &table.rows {
        for (j, c) in cells.iter().enumerate() {
            data.push(numeric_cell(path, *line, j, c)?);
        }
    }
    Ok(Matrix::new(table.rows.len(), cols, data).expect("validated shape"))
}

/// Samples per file row; features become the rows of the `d×n` data matrix.
/// Label values are mapped to class ids `1..=c` in order of first appearance.
pub fn parse_labeled_csv(
    path: &Path,
    label_column: &LabelColumn,
) -> Result<(LabeledDataset, Vec<String>), ParseError> {
    let table = read_table(path)?;
    let width = table.rows[0].1.len();
    let missing = || ParseError::MissingLabelColumn {
        path: path.to_path_buf(),
        column: label_column.to_string(),
    };
    let label_idx = match label_column {
        LabelColumn::Last => width - 1,
        LabelColumn::Index(i) if *i < width => *i,
        LabelColumn::Index(_) => return Err(missing()),
        LabelColumn::Name(name) => table
            .header
            .as_ref()
            .and_then(|h| h.iter().position(|c| c == name))
            .ok_or_else(missing)?,
    };
    if width < 2 {
        return Err(ParseError::MissingLabelColumn {
            path: path.to_path_buf(),
            column: "(no feature columns besides the label)".into(),
        });
    }
    let n = table.rows.len();
    let d = width - 1;
    let mut x = Matrix::zeros(d, n);
    let mut names: Vec<String> = Vec::new();
    let mut labels = Vec::with_capacity(n);
    for (k, (line, cells)) in table.rows.iter().enumerate() {
        let mut f = 0;
        for (j, c) in cells.iter().enumerate() {
            if j == label_idx {
                continue;
            }
            x[(f, k)] = numeric_cell(path, *line, j, c)?;
            f += 1;
        }
        let label = &cells[label_idx];
        let id = match names.iter().position(|s| s == label) {
            Some(i) => i + 1,
            None => {
                names.push(label.clone());
                names.len()
            }
        };
        labels.push(id);
    }
    let ds = LabeledDataset::new(x, Some(labels)).expect("one label per row");
    Ok((ds, names))
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_matrix_csv<W: Write>(m: &Matrix, out: &mut W) -> std::io::Result<()> {
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|&v| format_float(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}
