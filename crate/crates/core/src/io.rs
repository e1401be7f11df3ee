//! File formats: the shared JSON matrix format and helpers for reading
//! states, unitaries, and merge maps from disk.
//!
//! A matrix file is a single JSON object
//! `{"rows": R, "cols": C, "re": [[..]], "im": [[..]]}` with row-major 2-D
//! arrays of floats; `im` may be omitted for real matrices. Parsing is
//! strict: any shape mismatch is an error naming the offending row.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{validate_density, DensityMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::portrait::MergeMap;
use crate::tomography::UnitaryMatrix;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    re: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
}

fn shape_check(name: &str, part: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    let err = |reason: String| Error::ParseError {
        path: String::new(),
        reason,
    };
    if part.len() != rows {
        return Err(err(format!(
            "\"{name}\" has {} rows, expected {rows}",
            part.len()
        )));
    }
    for (i, row) in part.iter().enumerate() {
        if row.len() != cols {
            return Err(err(format!(
                "row {} of \"{name}\" has {} entries, expected {cols}",
                i + 1,
                row.len()
            )));
        }
        for (j, x) in row.iter().enumerate() {
            if !x.is_finite() {
                return Err(err(format!(
                    "row {} column {} of \"{name}\" is {x}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn matrix_from_file(file: MatrixFile) -> Result<ComplexMatrix> {
    shape_check("re", &file.re, file.rows, file.cols)?;
    if let Some(im) = &file.im {
        shape_check("im", im, file.rows, file.cols)?;
    }
    let mut entries = Vec::with_capacity(file.rows * file.cols);
    for i in 0..file.rows {
        for j in 0..file.cols {
            let im = file.im.as_ref().map_or(0.0, |m| m[i][j]);
            entries.push(Complex64::new(file.re[i][j], im));
        }
    }
    Ok(ComplexMatrix::new(file.rows, file.cols, entries))
}

fn at_path(err: Error, path: &Path) -> Error {
    match err {
        Error::ParseError { reason, .. } => Error::ParseError {
            path: path.display().to_string(),
            reason,
        },
        other => other,
    }
}

/// Parse a matrix from a JSON string (used by file and in-memory callers).
pub fn parse_matrix(json: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(json).map_err(|e| Error::ParseError {
        path: String::new(),
        reason: e.to_string(),
    })?;
    matrix_from_file(file)
}

/// Read a matrix file, enforcing the strict shape rules.
pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::IoError {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text).map_err(|e| at_path(e, path))
}

/// Serialize a matrix to the shared JSON form; `im` is omitted when every
/// imaginary part is exactly zero.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let real_only = m.entries().iter().all(|z| z.im == 0.0);
    let rows = m.rows();
    let cols = m.cols();
    let collect = |pick: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..rows)
            .map(|i| (0..cols).map(|j| pick(&m[(i, j)])).collect())
            .collect()
    };
    let file = MatrixFile {
        rows,
        cols,
        re: collect(|z| z.re),
        im: if real_only {
            None
        } else {
            Some(collect(|z| z.im))
        },
    };
    serde_json::to_string_pretty(&file).expect("matrix serialization cannot fail")
}

pub fn write_matrix_file(m: &ComplexMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, matrix_to_json(m)).map_err(|source| Error::IoError {
        path: path.display().to_string(),
        source,
    })
}

/// Read and certify a density matrix.
pub fn read_state_file(path: impl AsRef<Path>, tol: &Tolerances) -> Result<DensityMatrix> {
    validate_density(&read_matrix_file(path)?, tol)
}

/// Read and certify a unitary matrix.
pub fn read_unitary_file(path: impl AsRef<Path>) -> Result<UnitaryMatrix> {
    UnitaryMatrix::new(read_matrix_file(path)?)
}

/// Read a merge map from its JSON form.
pub fn read_merge_map_file(path: impl AsRef<Path>) -> Result<MergeMap> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::IoError {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::ParseError {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_real_matrix_without_im() {
        let m = parse_matrix(r#"{"rows":2,"cols":2,"re":[[1.0,0.0],[0.0,1.0]]}"#).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn parses_complex_matrix() {
        let m =
            parse_matrix(r#"{"rows":1,"cols":2,"re":[[0.5,0.25]],"im":[[0.0,-0.125]]}"#).unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.25, -0.125));
    }

    #[test]
    fn ragged_re_names_the_row() {
        let err =
            parse_matrix(r#"{"rows":2,"cols":3,"re":[[1.0,0.0,0.0],[0.0,1.0]]}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2"), "message was: {msg}");
    }

    #[test]
    fn wrong_row_count_is_rejected() {
        assert!(parse_matrix(r#"{"rows":3,"cols":1,"re":[[1.0]]}"#).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse_matrix(r#"{"rows":1,"cols":1,"re":[[1.0]],"extra":1}"#).is_err());
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        assert!(parse_matrix(r#"{"rows":1,"cols":1,"re":[[1e999]]}"#).is_err());
    }

    #[test]
    fn json_round_trip_real() {
        let m = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        let json = matrix_to_json(&m);
        assert!(!json.contains("\"im\""));
        let back = parse_matrix(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_round_trip_complex() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.25, -0.5);
        m[(1, 0)] = Complex64::new(0.25, 0.5);
        let json = matrix_to_json(&m);
        assert!(json.contains("\"im\""));
        let back = parse_matrix(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        let m = ComplexMatrix::from_real_diagonal(&[1.0 / 3.0; 3]);
        write_matrix_file(&m, &path).unwrap();
        let back = read_matrix_file(&path).unwrap();
        assert_eq!(back, m);
        let state = read_state_file(&path, &Tolerances::default()).unwrap();
        assert_eq!(state.dim(), 3);
    }

    #[test]
    fn missing_file_reports_path() {
        let err = read_matrix_file("/nonexistent/state.json").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/state.json"));
    }
}
