//! Plain-text distance matrices: one row per line, whitespace-separated.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use geokernel_core::{DistanceMatrix, Matrix};

use crate::error::{HarnessError, Result};

pub fn parse_distance_matrix(text: &str, path: &Path) -> Result<DistanceMatrix> {
    let parse_err = |line: usize, reason: String| HarnessError::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut last_line = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        last_line = line_no;
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| parse_err(line_no, format!("{tok:?} is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_err(
                    line_no,
                    format!("expected {} entries, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(1, "no matrix rows".into()));
    }
    if rows.len() != rows[0].len() {
        return Err(parse_err(
            last_line,
            format!("matrix is {}x{}, not square", rows.len(), rows[0].len()),
        ));
    }
    let m = Matrix::from_rows(&rows)?;
    Ok(DistanceMatrix::new(m, None)?)
}

pub fn read_distance_matrix(path: &Path) -> Result<DistanceMatrix> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_distance_matrix(&text, path)
}

/// Inverse of [`parse_distance_matrix`]; entries use shortest round-trip
/// formatting.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:e}")).collect();
        writeln!(out, "{}", row.join(" ")).expect("writing to a String cannot fail");
    }
    out
}
