//! Matrix Market (array and coordinate, real and complex) and CSV matrix files.
//!
//! Matrix Market values are written in the shortest form that parses back to
//! the same `f64`, so a file written here survives a read/write cycle byte
//! for byte. CSV cells carry 17 significant digits; complex cells are written
//! as `re+imi`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::dense::{Matrix, C64};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarketArray,
    MatrixMarketCoordinate,
    Csv,
}

impl MatrixFormat {
    /// `.csv` selects CSV; anything else is read as Matrix Market.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => MatrixFormat::Csv,
            _ => MatrixFormat::MatrixMarketArray,
        }
    }
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mtx" | "mm" | "array" => Ok(MatrixFormat::MatrixMarketArray),
            "coord" | "coordinate" | "mtx-coord" => Ok(MatrixFormat::MatrixMarketCoordinate),
            "csv" => Ok(MatrixFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown matrix format '{other}', expected mtx, coord or csv"
            ))),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("'{tok}' is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("'{tok}' is not finite")));
    }
    Ok(v)
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

/// Parses a Matrix Market `matrix` file in array or coordinate layout.
pub fn read_matrix_market(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let head: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if head.len() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" {
        return Err(parse_err(
            1,
            "expected '%%MatrixMarket matrix <array|coordinate> <field> <symmetry>'",
        ));
    }
    let coordinate = match head[2].as_str() {
        "array" => false,
        "coordinate" => true,
        other => return Err(parse_err(1, format!("unsupported layout '{other}'"))),
    };
    let complex = match head[3].as_str() {
        "real" | "integer" | "double" => false,
        "complex" => true,
        other => return Err(parse_err(1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match head[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, sizes) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = sizes
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(size_line, format!("bad size '{t}'"))))
        .collect::<Result<_>>()?;
    let expect = if coordinate { 3 } else { 2 };
    if dims.len() != expect {
        return Err(parse_err(size_line, format!("expected {expect} integers on the size line")));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows == 0 || cols == 0 {
        return Err(parse_err(size_line, "dimensions must be positive"));
    }
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(size_line, "symmetric storage requires a square matrix"));
    }

    let per_value = if complex { 2 } else { 1 };
    let mut m = Matrix::zeros(rows, cols);
    let place = |m: &mut Matrix, i: usize, j: usize, z: C64| {
        m[(i, j)] = z;
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => m[(j, i)] = z,
                Symmetry::SkewSymmetric => m[(j, i)] = -z,
                Symmetry::Hermitian => m[(j, i)] = z.conj(),
            }
        }
    };
    let value = |toks: &[&str], line: usize| -> Result<C64> {
        let re = parse_f64(toks[0], line)?;
        let im = if complex { parse_f64(toks[1], line)? } else { 0.0 };
        Ok(C64::new(re, im))
    };

    if coordinate {
        let nnz = dims[2];
        let mut seen = 0;
        for (line, l) in body {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 2 + per_value {
                return Err(parse_err(line, format!("expected {} fields", 2 + per_value)));
            }
            let idx = |t: &str, bound: usize| -> Result<usize> {
                match t.parse::<usize>() {
                    Ok(v) if (1..=bound).contains(&v) => Ok(v - 1),
                    _ => Err(parse_err(line, format!("index '{t}' out of range 1..={bound}"))),
                }
            };
            let (i, j) = (idx(toks[0], rows)?, idx(toks[1], cols)?);
            place(&mut m, i, j, value(&toks[2..], line)?);
            seen += 1;
        }
        if seen != nnz {
            return Err(parse_err(size_line, format!("declared {nnz} entries, found {seen}")));
        }
    } else {
        // Column-major; symmetric variants store only the lower triangle.
        let positions: Vec<(usize, usize)> = (0..cols)
            .flat_map(|j| {
                let start = if symmetry == Symmetry::General { 0 } else { j };
                (start..rows).map(move |i| (i, j))
            })
            .filter(|&(i, j)| symmetry != Symmetry::SkewSymmetric || i != j)
            .collect();
        let mut it = positions.iter();
        for (line, l) in body {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != per_value {
                return Err(parse_err(line, format!("expected {per_value} value field(s)")));
            }
            let &(i, j) = it
                .next()
                .ok_or_else(|| parse_err(line, "more values than the declared size"))?;
            place(&mut m, i, j, value(&toks, line)?);
        }
        if it.next().is_some() {
            return Err(parse_err(size_line, "fewer values than the declared size"));
        }
    }
    Ok(m)
}

/// Writes a general Matrix Market file, real when every entry is real.
pub fn write_matrix_market(m: &Matrix, coordinate: bool) -> String {
    let complex = !m.is_real();
    let mut out = format!(
        "%%MatrixMarket matrix {} {} general\n",
        if coordinate { "coordinate" } else { "array" },
        if complex { "complex" } else { "real" }
    );
    let fmt_value = |out: &mut String, z: C64| {
        if complex {
            let _ = write!(out, "{:e} {:e}", z.re, z.im);
        } else {
            let _ = write!(out, "{:e}", z.re);
        }
    };
    let zero = C64::new(0.0, 0.0);
    if coordinate {
        let mut entries = Vec::new();
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                if m[(i, j)] != zero {
                    entries.push((i, j));
                }
            }
        }
        let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), entries.len());
        for (i, j) in entries {
            let _ = write!(out, "{} {} ", i + 1, j + 1);
            fmt_value(&mut out, m[(i, j)]);
            out.push('\n');
        }
    } else {
        let _ = writeln!(out, "{} {}", m.rows(), m.cols());
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                fmt_value(&mut out, m[(i, j)]);
                out.push('\n');
            }
        }
    }
    out
}

fn parse_cell(cell: &str, line: usize) -> Result<C64> {
    let cell = cell.trim();
    let Some(body) = cell.strip_suffix('i') else {
        return Ok(C64::new(parse_f64(cell, line)?, 0.0));
    };
    // Split at the sign that starts the imaginary part: the last '+' or '-'
    // that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(parse_f64(&body[..k], line)?, parse_f64(&body[k..], line)?)),
        None => Ok(C64::new(0.0, parse_f64(body, line)?)),
    }
}

/// Parses comma-separated rows; blank lines and lines starting with `#` are
/// skipped.
pub fn read_csv(text: &str) -> Result<Matrix> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, l) in text.lines().enumerate() {
        let line = idx + 1;
        let t = l.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = t.split(',').collect();
        match cols {
            None => cols = Some(cells.len()),
            Some(c) if c != cells.len() => {
                return Err(parse_err(line, format!("expected {c} cells, found {}", cells.len())))
            }
            _ => {}
        }
        for c in cells {
            data.push(parse_cell(c, line)?);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_err(1, "no data rows"))?;
    Matrix::new(rows, cols, data)
}

fn fmt_cell(out: &mut String, z: C64, complex: bool) {
    if complex {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        let _ = write!(out, "{:.16e}{sign}{:.16e}i", z.re, z.im.abs());
    } else {
        let _ = write!(out, "{:.16e}", z.re);
    }
}

pub fn write_csv(m: &Matrix) -> String {
    let complex = !m.is_real();
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            fmt_cell(&mut out, m[(i, j)], complex);
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix(text: &str, format: MatrixFormat) -> Result<Matrix> {
    match format {
        MatrixFormat::Csv => read_csv(text),
        _ => read_matrix_market(text),
    }
}

pub fn write_matrix(m: &Matrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Csv => write_csv(m),
        MatrixFormat::MatrixMarketArray => write_matrix_market(m, false),
        MatrixFormat::MatrixMarketCoordinate => write_matrix_market(m, true),
    }
}

/// Reads a file, picking the format from the extension unless one is given.
pub fn read_matrix_file(path: &Path, format: Option<MatrixFormat>) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)?;
    read_matrix(&text, format.unwrap_or_else(|| MatrixFormat::from_path(path)))
}

pub fn write_matrix_file(path: &Path, m: &Matrix, format: MatrixFormat) -> Result<()> {
    std::fs::write(path, write_matrix(m, format))?;
    Ok(())
}
