//! Dense symmetric matrices in full row-major storage.

use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// Relative asymmetry tolerated when a matrix is built from raw entries.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A dense real symmetric matrix.
///
/// Both triangles are stored so that row access is contiguous. Every
/// constructor either writes entries in mirrored pairs or checks that
/// `max |m_ij - m_ji| <= 1e-12 * max |m|`.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = x;
        }
        m
    }

    /// Builds the matrix from `f(i, j)` evaluated on the upper triangle
    /// (`i <= j`) and mirrored.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let x = f(i, j);
                m.data[i * n + j] = x;
                m.data[j * n + i] = x;
            }
        }
        m
    }

    /// Wraps row-major data, rejecting non-square or asymmetric input.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidDimension(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        let m = Self { n, data };
        let scale = m.max_abs();
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = (m.get(i, j) - m.get(j, i)).abs();
                if diff > SYMMETRY_TOL * scale || diff.is_nan() {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j}): {diff:e}"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDimension(
                "rows must form a square matrix".into(),
            ));
        }
        Self::from_row_major(n, rows.concat())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] = x;
        self.data[j * self.n + i] = x;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Adds `c` to every entry, diagonal included.
    pub fn add_constant(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x + c).collect(),
        }
    }

    /// Returns `D M D` for the diagonal matrix `D = diag(scale)`.
    pub fn scale_sym(&self, scale: &[f64]) -> Self {
        assert_eq!(scale.len(), self.n, "scale dimension mismatch");
        let n = self.n;
        let mut data = self.data.clone();
        for (i, row) in data.chunks_exact_mut(n).enumerate() {
            let si = scale[i];
            for (x, &sj) in row.iter_mut().zip(scale) {
                *x *= si * sj;
            }
        }
        Self { n, data }
    }

    /// Returns `I - self`.
    pub fn identity_minus(&self) -> Self {
        let mut out = Self {
            n: self.n,
            data: self.data.iter().map(|x| -x).collect(),
        };
        for i in 0..self.n {
            out.data[i * self.n + i] += 1.0;
        }
        out
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({}x{})", self.n, self.n)?;
        if self.n <= 8 {
            for i in 0..self.n {
                writeln!(f, "  {:?}", self.row(i))?;
            }
        }
        Ok(())
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;

    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;

    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}
