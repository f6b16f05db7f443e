//! Delimited-text matrix and vector files.
//!
//! One row per line; fields separated by commas or by whitespace (a line that
//! contains a comma is split on commas only). Blank lines and lines whose
//! first non-blank character is `#` are skipped. Every row must have the same
//! number of fields, and every field must parse as a finite number.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{GdsError, Result};

fn parse_err(source: &str, line: usize, message: impl Into<String>) -> GdsError {
    GdsError::Parse {
        source_name: source.to_string(),
        line,
        message: message.into(),
    }
}

/// Parses matrix text; `source` names the input in error messages.
pub fn parse_matrix(text: &str, source: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let mut row = Vec::with_capacity(fields.len());
        for (col, field) in fields.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                parse_err(source, lineno, format!("field {} is not a number: {field:?}", col + 1))
            })?;
            if !v.is_finite() {
                return Err(parse_err(source, lineno, format!("field {} is not finite: {field:?}", col + 1)));
            }
            row.push(v);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(
                    source,
                    lineno,
                    format!("expected {w} fields as in the first row, found {}", row.len()),
                ))
            }
            _ => {}
        }
        rows.push(row);
    }
    let Some(w) = width else {
        return Err(parse_err(source, 0, "no data rows"));
    };
    Ok(DMatrix::from_fn(rows.len(), w, |i, j| rows[i][j]))
}

/// Parses a vector stored either one value per line or as a single row.
pub fn parse_vector(text: &str, source: &str) -> Result<DVector<f64>> {
    let m = parse_matrix(text, source)?;
    if m.ncols() == 1 || m.nrows() == 1 {
        Ok(DVector::from_iterator(m.len(), m.iter().copied()))
    } else {
        Err(parse_err(
            source,
            0,
            format!("expected a single row or column, found {}x{}", m.nrows(), m.ncols()),
        ))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| parse_err(&path.display().to_string(), 0, format!("cannot read file: {e}")))
}

pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>> {
    parse_matrix(&read(path)?, &path.display().to_string())
}

pub fn read_vector(path: &Path) -> Result<DVector<f64>> {
    parse_vector(&read(path)?, &path.display().to_string())
}

/// One value per line, printed with round-trip precision.
pub fn format_vector(v: &DVector<f64>) -> String {
    let mut out = String::new();
    for x in v.iter() {
        // `+ 0.0` turns -0 into 0
        let _ = writeln!(out, "{}", x + 0.0);
    }
    out
}

/// Comma-separated rows, printed with round-trip precision.
pub fn format_matrix(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|x| (x + 0.0).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_delimiters_and_comments() {
        let m = parse_matrix("# design\n1, 2,3\n\n  4 5\t6\n", "x.csv");
        // the second data row uses whitespace, the first commas
        let m = m.unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(1, 2)], 6.0);
        assert_eq!(m[(0, 1)], 2.0);
    }

    #[test]
    fn errors_name_source_and_line() {
        let e = parse_matrix("1,2\n3,x\n", "d.csv").unwrap_err();
        assert_eq!(e.to_string(), "d.csv:2: field 2 is not a number: \"x\"");
        let e = parse_matrix("1,2\n# c\n3\n", "d.csv").unwrap_err();
        assert!(e.to_string().starts_with("d.csv:3:"), "{e}");
        assert!(parse_matrix("1,nan\n", "d").is_err());
        assert!(parse_matrix("# only comments\n", "d").is_err());
    }

    #[test]
    fn vectors_row_or_column() {
        assert_eq!(parse_vector("1\n2\n3\n", "y").unwrap().len(), 3);
        assert_eq!(parse_vector("1 2 3\n", "y").unwrap().len(), 3);
        assert!(parse_vector("1 2\n3 4\n", "y").is_err());
    }

    #[test]
    fn round_trip() {
        let m = DMatrix::from_row_slice(2, 2, &[0.1, -1e-300, 1.0 / 3.0, 12345.678]);
        assert_eq!(parse_matrix(&format_matrix(&m), "m").unwrap(), m);
        let v = DVector::from_vec(vec![std::f64::consts::PI, -0.0, 5e-324]);
        assert_eq!(parse_vector(&format_vector(&v), "v").unwrap(), v);
    }
}
