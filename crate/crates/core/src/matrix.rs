//! Dense square matrices and the plain-text matrix format.
//!
//! The text format is a dimension line `n` followed by `n` lines of `n`
//! whitespace-separated decimal numbers. Output uses 17 significant digits,
//! so writing and re-reading a matrix reproduces it bit for bit.

use std::fmt::Write as _;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};

/// Dense real `n × n` matrix stored row-major. Entries are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at ({}, {})",
                pos / n,
                pos % n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "dimension must be at least 1");
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    pub fn scalar(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        let mut data = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            data[i * n + i] = *d;
        }
        Self::new(n, data)
    }

    /// Builds a matrix entry by entry. Panics if `f` yields a non-finite value.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::new(n, data).expect("from_fn produced an invalid matrix")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        self.off_diagonal().all(|(_, _, x)| x == 0.0)
    }

    /// Iterates `(i, j, value)` over off-diagonal positions.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .filter(move |(k, _)| k / n != k % n)
            .map(move |(k, &x)| (k / n, k % n, x))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// `self + c·I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += c;
        }
        m
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SquareMatrix, b: f64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `xᵀ·self`, returned as a plain vector.
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        let mut out = vec![0.0; self.n];
        for (xi, row) in x.iter().zip(self.data.chunks_exact(self.n)) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += xi * a;
            }
        }
        out
    }

    pub fn matmul(&self, other: &SquareMatrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            let out = &mut data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Self { n, data }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        self.vec_mul(&vec![1.0; self.n])
    }

    /// Principal submatrix on the given (ordered) index set.
    pub fn submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |a, b| self[(indices[a], indices[b])])
    }

    /// Parses the plain-text matrix format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidMatrix("empty matrix text".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::InvalidMatrix(format!("bad dimension line {header:?}")))?;
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::InvalidMatrix(format!("missing row {}", r + 1)))?;
            let before = data.len();
            for tok in line.split_whitespace() {
                let x: f64 = tok
                    .parse()
                    .map_err(|_| Error::InvalidMatrix(format!("bad number {tok:?} in row {}", r + 1)))?;
                data.push(x);
            }
            if data.len() - before != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    r + 1,
                    data.len() - before
                )));
            }
        }
        if lines.next().is_some() {
            return Err(Error::InvalidMatrix("trailing data after last row".into()));
        }
        Self::new(n, data)
    }

    /// Renders the plain-text matrix format (17 significant digits, LF endings).
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.data.chunks_exact(self.n) {
            let cells: Vec<String> = row.iter().map(|x| format_f64(*x)).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }
}

/// Formats a float with 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;

    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.combine(1.0, rhs, 1.0)
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;

    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.combine(1.0, rhs, -1.0)
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.matmul(rhs)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(SquareMatrix::new(1, vec![f64::NAN]).is_err());
        assert!(SquareMatrix::new(2, vec![0.0, 1.0, f64::INFINITY, 0.0]).is_err());
        assert!(SquareMatrix::new(0, vec![]).is_err());
        assert!(matches!(
            SquareMatrix::new(2, vec![1.0; 3]),
            Err(Error::DimensionMismatch { expected: 4, actual: 3 })
        ));
    }

    #[test]
    fn text_round_trip_is_exact() {
        let m = SquareMatrix::from_rows(&[[0.1, -1.0 / 3.0], [1e-300, 2.0f64.sqrt()]]).unwrap();
        let back = SquareMatrix::parse(&m.to_text()).unwrap();
        assert_eq!(m, back);
        assert!(m.to_text().starts_with("2\n"));
    }

    #[test]
    fn parse_errors() {
        assert!(SquareMatrix::parse("").is_err());
        assert!(SquareMatrix::parse("2\n1 2\n3").is_err());
        assert!(SquareMatrix::parse("2\n1 2\n3 x").is_err());
        assert!(SquareMatrix::parse("1\n1\n2").is_err());
    }

    #[test]
    fn products_and_sums() {
        let a = SquareMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let b = SquareMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!((&a * &b).as_slice(), &[2.0, 1.0, 4.0, 3.0]);
        assert_eq!(a.mul_vec(&[1.0, 1.0]), vec![3.0, 7.0]);
        assert_eq!(a.vec_mul(&[1.0, 1.0]), vec![4.0, 6.0]);
        assert_eq!(a.column_sums(), vec![4.0, 6.0]);
        assert_eq!(a.norm_inf(), 7.0);
        assert_eq!(a.transpose()[(0, 1)], 3.0);
        assert_eq!(a.submatrix(&[1]).as_slice(), &[4.0]);
    }
}
