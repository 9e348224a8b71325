//! Small dense linear algebra: LU with partial pivoting, determinants,
//! solves, inverses and singular values by one-sided Jacobi rotations.
//!
//! Matrices here are at most a few hundred rows, so everything is
//! row-major `Vec<f64>` with no blocking.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds from a row-major buffer.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::SizeMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::SizeMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Rows picked by position, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        DenseMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::SizeMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `P·A = L·U` with `L` unit lower triangular.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactorization {
    /// Row `i` of `P·A` is row `permutation[i]` of `A`.
    pub permutation: Vec<usize>,
    pub lower: DenseMatrix,
    pub upper: DenseMatrix,
    /// Parity of the permutation, `±1`.
    pub sign: f64,
}

impl LuFactorization {
    pub fn dim(&self) -> usize {
        self.permutation.len()
    }

    pub fn determinant(&self) -> f64 {
        (0..self.dim()).fold(self.sign, |acc, i| acc * self.upper[(i, i)])
    }

    /// Solves `L·y = b` in place.
    pub fn forward_substitute(&self, y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.lower[(i, k)] * y[k];
            }
            y[i] = s;
        }
    }

    /// Solves `U·x = y` in place.
    pub fn back_substitute(&self, x: &mut [f64]) {
        let n = self.dim();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.upper[(i, k)] * x[k];
            }
            x[i] = s / self.upper[(i, i)];
        }
    }

    /// Applies `P` to `b`.
    pub fn permute(&self, b: &[f64]) -> Vec<f64> {
        self.permutation.iter().map(|&p| b[p]).collect()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim() {
            return Err(Error::SizeMismatch {
                expected: self.dim(),
                found: b.len(),
            });
        }
        let mut x = self.permute(b);
        self.forward_substitute(&mut x);
        self.back_substitute(&mut x);
        Ok(x)
    }
}

/// LU factorization with partial pivoting.
///
/// The pivot is the largest magnitude entry of the column; ties go to the
/// smallest row index. Only an exactly zero pivot column is reported as
/// singular.
pub fn lu_factor(a: &DenseMatrix) -> Result<LuFactorization> {
    a.require_square()?;
    let n = a.rows();
    let mut work = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_abs = work[(col, col)].abs();
        for r in col + 1..n {
            let v = work[(r, col)].abs();
            if v > pivot_abs || (v == pivot_abs && perm[r] < perm[pivot_row]) {
                pivot_abs = v;
                pivot_row = r;
            }
        }
        if pivot_abs == 0.0 || !pivot_abs.is_finite() {
            return Err(Error::SingularMatrix { column: col });
        }
        if pivot_row != col {
            for j in 0..n {
                work.data.swap(col * n + j, pivot_row * n + j);
            }
            perm.swap(col, pivot_row);
            sign = -sign;
        }
        let pivot = work[(col, col)];
        for r in col + 1..n {
            let factor = work[(r, col)] / pivot;
            work[(r, col)] = factor;
            if factor != 0.0 {
                for j in col + 1..n {
                    work[(r, j)] -= factor * work[(col, j)];
                }
            }
        }
    }

    let lower = DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => work[(i, j)],
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Less => 0.0,
    });
    let upper = DenseMatrix::from_fn(n, n, |i, j| if i <= j { work[(i, j)] } else { 0.0 });
    Ok(LuFactorization {
        permutation: perm,
        lower,
        upper,
        sign,
    })
}

/// Determinant; structurally singular matrices give `0.0`.
pub fn determinant(a: &DenseMatrix) -> Result<f64> {
    a.require_square()?;
    match lu_factor(a) {
        Ok(lu) => Ok(lu.determinant()),
        Err(Error::SingularMatrix { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

pub fn solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    lu_factor(a)?.solve(b)
}

pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    let lu = lu_factor(a)?;
    let n = a.rows();
    let mut inv = DenseMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        let x = lu.solve(&e)?;
        for i in 0..n {
            inv[(i, j)] = x[i];
        }
    }
    Ok(inv)
}

/// Row choices of Gaussian elimination with partial pivoting on a tall
/// `m × n` matrix.
///
/// Returns the `n` pivot rows in elimination order, or the first column that
/// had no nonzero candidate.
pub fn pivot_rows(a: &DenseMatrix) -> std::result::Result<Vec<usize>, usize> {
    let (m, n) = (a.rows(), a.cols());
    let mut work = a.clone();
    let mut order: Vec<usize> = (0..m).collect();
    for col in 0..n.min(m) {
        let mut best = col;
        let mut best_abs = work[(col, col)].abs();
        for r in col + 1..m {
            let v = work[(r, col)].abs();
            if v > best_abs || (v == best_abs && order[r] < order[best]) {
                best_abs = v;
                best = r;
            }
        }
        if best_abs == 0.0 || !best_abs.is_finite() {
            return Err(col);
        }
        if best != col {
            for j in 0..n {
                work.data.swap(col * n + j, best * n + j);
            }
            order.swap(col, best);
        }
        let pivot = work[(col, col)];
        for r in col + 1..m {
            let factor = work[(r, col)] / pivot;
            if factor != 0.0 {
                for j in col + 1..n {
                    work[(r, j)] -= factor * work[(col, j)];
                }
                work[(r, col)] = 0.0;
            }
        }
    }
    if m < n {
        return Err(m);
    }
    Ok(order[..n].to_vec())
}

/// Singular values in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn spectral_norm(&self) -> f64 {
        self.max()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|s| s * s).sum::<f64>().sqrt()
    }

    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }
}

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 60;

/// Singular values by one-sided (Hestenes) Jacobi rotations.
///
/// Columns are orthogonalised until every pairwise dot product is below
/// `1e-14` times the product of the column norms, or 60 sweeps have run.
pub fn singular_values(a: &DenseMatrix) -> SingularSpectrum {
    // Work on the orientation with fewer columns; store columns contiguously.
    let (m, n, mut cols) = if a.rows() >= a.cols() {
        let cols: Vec<Vec<f64>> = (0..a.cols()).map(|j| a.column(j)).collect();
        (a.rows(), a.cols(), cols)
    } else {
        let cols: Vec<Vec<f64>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
        (a.cols(), a.rows(), cols)
    };
    let _ = m;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = 0.0;
                    for (x, y) in cp.iter().zip(cq) {
                        alpha += x * x;
                        beta += y * y;
                        gamma += x * y;
                    }
                    (alpha, beta, gamma)
                };
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    SingularSpectrum { values }
}
