//! Text formats for exact scalars and matrices.
//!
//! Rationals are written `p` or `p/q` in lowest terms; quadratic elements as
//! `a+b*sqrt(d)`. Matrices use a small JSON object
//! `{"rows": r, "cols": c, "entries": [[...], ...]}` with string entries, or
//! CSV with one matrix row per line. Writers are canonical, so parsing and
//! re-writing a canonical file reproduces it byte for byte.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::Value;

use super::{Matrix, QuadExt, Rational, Scalar};
use crate::error::{Error, Result};

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.trim_start_matches('+').parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A matrix read from a file, over whichever field its entries require.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMatrix {
    Rational(Matrix<Rational>),
    Sqrt2(Matrix<QuadExt<2>>),
}

impl AnyMatrix {
    pub fn rows(&self) -> usize {
        match self {
            AnyMatrix::Rational(m) => m.rows(),
            AnyMatrix::Sqrt2(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            AnyMatrix::Rational(m) => m.cols(),
            AnyMatrix::Sqrt2(m) => m.cols(),
        }
    }
}

#[derive(Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Value>>,
}

fn value_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        other => Err(Error::Parse(format!("matrix entry must be a string or integer, got {other}"))),
    }
}

fn parse_grid<T: Scalar>(rows: usize, cols: usize, grid: &[Vec<String>]) -> Result<Matrix<T>> {
    if grid.len() != rows || grid.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!("entries do not form a {rows}x{cols} grid")));
    }
    let entries = grid.iter().flatten().map(|s| T::parse_exact(s)).collect::<Result<Vec<_>>>()?;
    Matrix::from_vec(rows, cols, entries)
}

fn parse_any(rows: usize, cols: usize, grid: &[Vec<String>]) -> Result<AnyMatrix> {
    let irrational = grid.iter().flatten().any(|s| s.contains("sqrt"));
    if !irrational {
        return parse_grid(rows, cols, grid).map(AnyMatrix::Rational);
    }
    if grid.iter().flatten().filter(|s| s.contains("sqrt")).any(|s| !s.contains("sqrt(2)")) {
        return Err(Error::Parse("only sqrt(2) extensions are supported".into()));
    }
    parse_grid(rows, cols, grid).map(AnyMatrix::Sqrt2)
}

pub fn matrix_from_json(text: &str) -> Result<AnyMatrix> {
    let file: MatrixFile = serde_json::from_str(text)?;
    let grid = file
        .entries
        .iter()
        .map(|r| r.iter().map(value_text).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    parse_any(file.rows, file.cols, &grid)
}

pub fn matrix_to_json<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = format!("{{\n  \"rows\": {},\n  \"cols\": {},\n  \"entries\": [\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("\"{}\"", x.to_exact_string())).collect();
        out.push_str("    [");
        out.push_str(&row.join(", "));
        out.push(']');
        if i + 1 < m.rows() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn matrix_from_csv(text: &str) -> Result<AnyMatrix> {
    let grid: Vec<Vec<String>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(|s| s.trim().to_string()).collect())
        .collect();
    let rows = grid.len();
    let cols = grid.first().map_or(0, Vec::len);
    parse_any(rows, cols, &grid)
}

pub fn matrix_to_csv<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(Scalar::to_exact_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
