//! File formats: Matrix Market coordinate files for sparse matrices, CSV for
//! dense matrices, and a flat CSV layout for tensors.
//!
//! Floating-point values are written with Rust's shortest round-trip
//! formatting, so `read(write(x))` reproduces `x` bit for bit.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;
use crate::tt::DenseTensor;
use num_complex::Complex64;
use std::path::Path;

const MM_REAL_HEADER: &str = "%%MatrixMarket matrix coordinate real general";
const MM_COMPLEX_HEADER: &str = "%%MatrixMarket matrix coordinate complex general";

/// Serializes a real sparse matrix in Matrix Market coordinate format
/// (1-based indices, row-major entry order).
pub fn matrix_market_to_string(a: &SparseMatrix<f64>) -> String {
    let mut out = String::new();
    out.push_str(MM_REAL_HEADER);
    out.push('\n');
    out.push_str(&format!("{} {} {}\n", a.nrows(), a.ncols(), a.nnz()));
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            out.push_str(&format!("{} {} {}\n", i + 1, j + 1, v));
        }
    }
    out
}

/// Serializes a complex sparse matrix (entry lines carry real and imaginary
/// parts).
pub fn matrix_market_complex_to_string(a: &SparseMatrix<Complex64>) -> String {
    let mut out = String::new();
    out.push_str(MM_COMPLEX_HEADER);
    out.push('\n');
    out.push_str(&format!("{} {} {}\n", a.nrows(), a.ncols(), a.nnz()));
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            out.push_str(&format!("{} {} {} {}\n", i + 1, j + 1, v.re, v.im));
        }
    }
    out
}

fn parse_mm_body(
    text: &str,
    expected_header: &str,
    values_per_entry: usize,
) -> Result<(usize, usize, Vec<(usize, usize, Vec<f64>)>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))?
        .trim();
    if header != expected_header {
        return Err(Error::Parse(format!(
            "unsupported header {header:?}, expected {expected_header:?}"
        )));
    }
    let mut dims: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    for (lineno, raw) in lines.enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if dims.is_none() {
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "line {}: expected 'nrows ncols nnz'",
                    lineno + 2
                )));
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad size {s:?}", lineno + 2)))
            };
            dims = Some((parse(fields[0])?, parse(fields[1])?, parse(fields[2])?));
            continue;
        }
        let (nrows, ncols, _) = dims.unwrap();
        if fields.len() != 2 + values_per_entry {
            return Err(Error::Parse(format!(
                "line {}: expected {} fields",
                lineno + 2,
                2 + values_per_entry
            )));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad row index", lineno + 2)))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad column index", lineno + 2)))?;
        if i == 0 || j == 0 || i > nrows || j > ncols {
            return Err(Error::Parse(format!(
                "line {}: index ({i}, {j}) outside 1..={nrows} x 1..={ncols}",
                lineno + 2
            )));
        }
        let mut vals = Vec::with_capacity(values_per_entry);
        for f in &fields[2..] {
            vals.push(f.parse::<f64>().map_err(|_| {
                Error::Parse(format!("line {}: bad value {f:?}", lineno + 2))
            })?);
        }
        entries.push((i - 1, j - 1, vals));
    }
    let (nrows, ncols, nnz) =
        dims.ok_or_else(|| Error::Parse("missing size line".into()))?;
    if entries.len() != nnz {
        return Err(Error::Parse(format!(
            "entry count {} does not match declared nnz {nnz}",
            entries.len()
        )));
    }
    Ok((nrows, ncols, entries))
}

/// Parses a real Matrix Market coordinate file.
pub fn matrix_market_from_string(text: &str) -> Result<SparseMatrix<f64>> {
    let (nrows, ncols, entries) = parse_mm_body(text, MM_REAL_HEADER, 1)?;
    let triplets: Vec<(usize, usize, f64)> =
        entries.into_iter().map(|(i, j, v)| (i, j, v[0])).collect();
    SparseMatrix::from_triplets(nrows, ncols, &triplets)
}

/// Parses a complex Matrix Market coordinate file.
pub fn matrix_market_complex_from_string(text: &str) -> Result<SparseMatrix<Complex64>> {
    let (nrows, ncols, entries) = parse_mm_body(text, MM_COMPLEX_HEADER, 2)?;
    let triplets: Vec<(usize, usize, Complex64)> = entries
        .into_iter()
        .map(|(i, j, v)| (i, j, Complex64::new(v[0], v[1])))
        .collect();
    SparseMatrix::from_triplets(nrows, ncols, &triplets)
}

/// Write a text file, mapping IO failures into the crate error type.
pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_matrix_market(path: impl AsRef<Path>, a: &SparseMatrix<f64>) -> Result<()> {
    std::fs::write(path, matrix_market_to_string(a))?;
    Ok(())
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix<f64>> {
    matrix_market_from_string(&std::fs::read_to_string(path)?)
}

pub fn write_matrix_market_complex(
    path: impl AsRef<Path>,
    a: &SparseMatrix<Complex64>,
) -> Result<()> {
    std::fs::write(path, matrix_market_complex_to_string(a))?;
    Ok(())
}

pub fn read_matrix_market_complex(path: impl AsRef<Path>) -> Result<SparseMatrix<Complex64>> {
    matrix_market_complex_from_string(&std::fs::read_to_string(path)?)
}

/// Serializes a dense matrix as CSV, one row per line.
pub fn dense_csv_to_string(a: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols()).map(|j| format!("{}", a.get(i, j))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parses a dense CSV matrix.
pub fn dense_csv_from_string(text: &str) -> Result<DenseMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            row.push(field.trim().parse::<f64>().map_err(|_| {
                Error::Parse(format!("line {}: bad value {field:?}", lineno + 1))
            })?);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty CSV".into()));
    }
    DenseMatrix::from_rows(&rows)
}

pub fn write_dense_csv(path: impl AsRef<Path>, a: &DenseMatrix) -> Result<()> {
    std::fs::write(path, dense_csv_to_string(a))?;
    Ok(())
}

pub fn read_dense_csv(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    dense_csv_from_string(&std::fs::read_to_string(path)?)
}

/// Serializes a tensor as a dims header line followed by one value per line
/// in storage order (first index fastest).
pub fn tensor_csv_to_string(t: &DenseTensor) -> String {
    let dims: Vec<String> = t.dims().iter().map(|d| d.to_string()).collect();
    let mut out = format!("# dims={}\n", dims.join(","));
    for v in t.values() {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// Parses the flat tensor CSV layout.
pub fn tensor_csv_from_string(text: &str) -> Result<DenseTensor> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty tensor file".into()))?
        .trim();
    let dims_part = header
        .strip_prefix("# dims=")
        .ok_or_else(|| Error::Parse("tensor file must start with '# dims='".into()))?;
    let mut dims = Vec::new();
    for d in dims_part.split(',') {
        dims.push(
            d.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad dimension {d:?}")))?,
        );
    }
    let mut values = Vec::new();
    for (lineno, raw) in lines.enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        values.push(line.parse::<f64>().map_err(|_| {
            Error::Parse(format!("line {}: bad value {line:?}", lineno + 2))
        })?);
    }
    DenseTensor::from_values(dims, values)
}

pub fn write_tensor_csv(path: impl AsRef<Path>, t: &DenseTensor) -> Result<()> {
    std::fs::write(path, tensor_csv_to_string(t))?;
    Ok(())
}

pub fn read_tensor_csv(path: impl AsRef<Path>) -> Result<DenseTensor> {
    tensor_csv_from_string(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_market_roundtrip_is_bit_exact() {
        let a = SparseMatrix::from_triplets(
            3,
            4,
            &[
                (0, 0, 1.5),
                (0, 3, -2.25e-13),
                (1, 1, std::f64::consts::PI),
                (2, 2, 1.0 / 3.0),
            ],
        )
        .unwrap();
        let text = matrix_market_to_string(&a);
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real general\n"));
        let b = matrix_market_from_string(&text).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn complex_matrix_market_roundtrip_is_bit_exact() {
        let a = SparseMatrix::from_triplets(
            2,
            2,
            &[
                (0, 0, Complex64::new(1.0, -0.5)),
                (1, 0, Complex64::new(-1.0 / 7.0, 2.0)),
            ],
        )
        .unwrap();
        let b = matrix_market_complex_from_string(&matrix_market_complex_to_string(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn one_based_indices_are_enforced() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 3.5\n";
        assert!(matrix_market_from_string(text).is_err());
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 3.5\n";
        assert!(matrix_market_from_string(text).is_err());
    }

    #[test]
    fn wrong_header_is_rejected() {
        let text = "%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n3.0\n4.0\n";
        assert!(matrix_market_from_string(text).is_err());
    }

    #[test]
    fn nnz_mismatch_is_rejected() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n";
        assert!(matrix_market_from_string(text).is_err());
    }

    #[test]
    fn dense_csv_roundtrip_is_bit_exact() {
        let a = DenseMatrix::from_rows(&[
            vec![1.0 / 3.0, -2.5e-17],
            vec![std::f64::consts::E, 4.0],
        ])
        .unwrap();
        let b = dense_csv_from_string(&dense_csv_to_string(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tensor_roundtrip_preserves_dims_and_values() {
        let t = DenseTensor::from_fn(&[2, 3, 2], |idx| {
            (idx[0] + 10 * idx[1] + 100 * idx[2]) as f64 / 7.0
        });
        let u = tensor_csv_from_string(&tensor_csv_to_string(&t)).unwrap();
        assert_eq!(t.dims(), u.dims());
        assert_eq!(t.values(), u.values());
    }
}
