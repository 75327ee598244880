//! Dense complex matrices, the row-major vectorization, Kronecker products,
//! and a self-contained cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Everything downstream (superoperator algebra, positivity certificates,
//! the search routines) is built on this module, so the conventions here are
//! load-bearing: matrices are stored row-major, and `vectorize` stacks rows,
//! i.e. vec([[a,b],[c,d]]) = (a, b, c, d)^T.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};
use thiserror::Error;

/// Hermiticity tolerance accepted by the eigensolver before symmetrizing.
pub const EIGH_HERMITICITY_TOL: f64 = 1e-10;

/// Errors produced by matrix operations.
#[derive(Debug, Clone, Error)]
pub enum MatrixError {
    #[error("matrix is not Hermitian: asymmetry {defect:.3e} exceeds tolerance {tol:.3e}")]
    NonHermitianInput { defect: f64, tol: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("eigensolver failed to converge within {0} sweeps")]
    NoConvergence(usize),
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        ComplexMatrix { rows: r, cols: c, data }
    }

    /// Builds a real matrix from row slices. Panics on ragged input.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
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

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }

    /// max |M[i][j] - conj(M[j][i])| over all entries.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// (M + M^dagger)/2.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Kronecker product; block (i,j) of the result is self[i][j] * other.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let s = self[(i, j)];
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out[(i * other.rows + p, j * other.cols + q)] = s * other[(p, q)];
                    }
                }
            }
        }
        out
    }

    /// Row-stacking vectorization: the (r, s) entry lands at position r*cols + s.
    pub fn vectorize(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows * self.cols,
            cols: 1,
            data: self.data.clone(),
        }
    }

    /// Inverse of `vectorize`; `v` must be a column of length rows*cols.
    pub fn unvectorize(v: &ComplexMatrix, rows: usize, cols: usize) -> Result<Self, MatrixError> {
        if v.cols != 1 || v.rows != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "expected a {}x1 column, got {}x{}",
                rows * cols,
                v.rows,
                v.cols
            )));
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            data: v.data.clone(),
        })
    }

    /// Extracts column `j` as an n x 1 matrix.
    pub fn column(&self, j: usize) -> ComplexMatrix {
        Self::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(1.0);
        for col in 0..n {
            let (mut pivot_row, mut pivot_mag) = (col, a[(col, col)].norm());
            for r in col + 1..n {
                let mag = a[(r, col)].norm();
                if mag > pivot_mag {
                    pivot_row = r;
                    pivot_mag = mag;
                }
            }
            if pivot_mag <= 1e-14 * scale {
                return Err(MatrixError::Singular);
            }
            if pivot_row != col {
                for j in 0..n {
                    let (x, y) = (a[(col, j)], a[(pivot_row, j)]);
                    a[(col, j)] = y;
                    a[(pivot_row, j)] = x;
                    let (x, y) = (inv[(col, j)], inv[(pivot_row, j)]);
                    inv[(col, j)] = y;
                    inv[(pivot_row, j)] = x;
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * ac;
                    inv[(r, j)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue(&self) -> Result<f64, MatrixError> {
        let eig = self.eigh()?;
        Ok(*eig.eigenvalues.last().expect("non-empty spectrum"))
    }

    /// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// The input must be Hermitian within 1e-10; it is symmetrized as
    /// (M + M^dagger)/2 before iterating. Rotations sweep all upper-triangle
    /// pairs until the off-diagonal Frobenius norm falls below 1e-14 times the
    /// Frobenius norm of the input, with a hard cap of 100 sweeps.
    /// Eigenvalues are returned in descending order with matching eigenvector
    /// columns.
    pub fn eigh(&self) -> Result<EigenResult, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::DimensionMismatch(
                "eigendecomposition of a non-square matrix".into(),
            ));
        }
        let defect = self.hermitian_defect();
        if defect > EIGH_HERMITICITY_TOL {
            return Err(MatrixError::NonHermitianInput {
                defect,
                tol: EIGH_HERMITICITY_TOL,
            });
        }
        let n = self.rows;
        let mut w = self.hermitize();
        let mut v = Self::identity(n);
        let fro = w.frobenius_norm();
        if n <= 1 || fro == 0.0 {
            let eigenvalues = (0..n).map(|i| w[(i, i)].re).collect();
            return Ok(EigenResult {
                eigenvalues,
                eigenvectors: v,
            });
        }
        let target_sq = (1e-14 * fro) * (1e-14 * fro);
        const MAX_SWEEPS: usize = 100;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut off_sq = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off_sq += 2.0 * w[(i, j)].norm_sqr();
                }
            }
            if off_sq <= target_sq {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let b = w[(p, q)];
                    let r = b.norm();
                    if r == 0.0 {
                        continue;
                    }
                    let a_pp = w[(p, p)].re;
                    let a_qq = w[(q, q)].re;
                    let tau = (a_qq - a_pp) / (2.0 * r);
                    // Smaller-magnitude root of t^2 - 2*tau*t - 1 = 0, in a
                    // cancellation-free form.
                    let t = if tau >= 0.0 {
                        -1.0 / (tau + (tau * tau + 1.0).sqrt())
                    } else {
                        1.0 / (-tau + (tau * tau + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    // s carries the phase of the annihilated entry.
                    let s = b.conj() * (t * c / r);
                    // Right-multiply by the rotation: columns p and q.
                    for i in 0..n {
                        let wp = w[(i, p)];
                        let wq = w[(i, q)];
                        w[(i, p)] = wp * c + wq * s;
                        w[(i, q)] = wq * c - wp * s.conj();
                    }
                    // Left-multiply by its adjoint: rows p and q.
                    for j in 0..n {
                        let wp = w[(p, j)];
                        let wq = w[(q, j)];
                        w[(p, j)] = wp * c + wq * s.conj();
                        w[(q, j)] = wq * c - wp * s;
                    }
                    w[(p, q)] = Complex64::new(0.0, 0.0);
                    w[(q, p)] = Complex64::new(0.0, 0.0);
                    w[(p, p)] = Complex64::new(w[(p, p)].re, 0.0);
                    w[(q, q)] = Complex64::new(w[(q, q)].re, 0.0);
                    for i in 0..n {
                        let vp = v[(i, p)];
                        let vq = v[(i, q)];
                        v[(i, p)] = vp * c + vq * s;
                        v[(i, q)] = vq * c - vp * s.conj();
                    }
                }
            }
        }
        if !converged {
            // One final check: the last sweep may have reached the target.
            let mut off_sq = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off_sq += 2.0 * w[(i, j)].norm_sqr();
                }
            }
            if off_sq > target_sq {
                return Err(MatrixError::NoConvergence(MAX_SWEEPS));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
        order.sort_by(|&a, &b| diag[b].partial_cmp(&diag[a]).expect("finite eigenvalues"));
        let eigenvalues = order.iter().map(|&i| diag[i]).collect();
        let eigenvectors = Self::from_fn(n, n, |i, j| v[(i, order[j])]);
        Ok(EigenResult {
            eigenvalues,
            eigenvectors,
        })
    }
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in descending
/// order, eigenvectors as the matching columns.
#[derive(Clone, Debug)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenResult {
    /// Rebuilds V diag(w) V^dagger; used by reconstruction checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let s = self[(i, k)];
                if s.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += s * other[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vectorize_stacks_rows() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(4.0, 0.0)],
        ]);
        let v = m.vectorize();
        assert_eq!(v.rows(), 4);
        for (i, want) in [1.0, 2.0, 3.0, 4.0].iter().enumerate() {
            assert_eq!(v[(i, 0)].re, *want);
        }
        let back = ComplexMatrix::unvectorize(&v, 2, 2).unwrap();
        assert!(back == m, "round trip must be bitwise");
    }

    #[test]
    fn unvectorize_rejects_bad_shape() {
        let v = ComplexMatrix::zeros(3, 1);
        assert!(matches!(
            ComplexMatrix::unvectorize(&v, 2, 2),
            Err(MatrixError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn kron_basic_block_structure() {
        let a = ComplexMatrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = ComplexMatrix::from_real(&[&[0.0, 5.0], &[6.0, 7.0]]);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 1)].re, 5.0);
        assert_eq!(k[(1, 0)].re, 6.0);
        assert_eq!(k[(2, 1)].re, 3.0 * 5.0);
        assert_eq!(k[(2, 3)].re, 4.0 * 5.0);
        assert_eq!(k[(3, 3)].re, 4.0 * 7.0);
    }

    #[test]
    fn kron_mixed_product_identity() {
        // (A kron B)(C kron D) = AC kron BD on fixed small matrices.
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(0.0, 2.0)], vec![c(3.0, 0.0), c(1.0, -1.0)]]);
        let b = ComplexMatrix::from_rows(&[vec![c(0.5, 0.0), c(0.0, -1.0)], vec![c(2.0, 1.0), c(1.0, 0.0)]]);
        let cm = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, -1.0)], vec![c(0.0, 1.0), c(1.0, 1.0)]]);
        let d = ComplexMatrix::from_rows(&[vec![c(1.0, -2.0), c(0.0, 0.0)], vec![c(0.0, 3.0), c(2.0, 0.0)]]);
        let lhs = &a.kron(&b) * &cm.kron(&d);
        let rhs = (&a * &cm).kron(&(&b * &d));
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn eigh_pauli_z() {
        let sz = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let eig = sz.eigh().unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_swap_spectrum() {
        let swap = ComplexMatrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        let eig = swap.eigh().unwrap();
        let want = [1.0, 1.0, 1.0, -1.0];
        for (got, want) in eig.eigenvalues.iter().zip(want.iter()) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
    }

    #[test]
    fn eigh_known_rank_two_spectrum() {
        // Dynamics-of-a-shifted-ellipsoid certificate matrix; spectrum is
        // {5/3, 1/3, 0, 0}.
        let s = (2.0f64 / 3.0).sqrt();
        let b = ComplexMatrix::from_real(&[
            &[1.0, 0.0, 0.0, s],
            &[0.0, 1.0 / 3.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[s, 0.0, 0.0, 2.0 / 3.0],
        ]);
        let eig = b.eigh().unwrap();
        let want = [5.0 / 3.0, 1.0 / 3.0, 0.0, 0.0];
        for (got, want) in eig.eigenvalues.iter().zip(want.iter()) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            m.eigh(),
            Err(MatrixError::NonHermitianInput { .. })
        ));
    }

    /// Deterministic pseudo-random Hermitian matrix (no external RNG needed).
    fn pseudo_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let raw = ComplexMatrix::from_fn(n, n, |_, _| c(next(), next()));
        raw.hermitize()
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        for (n, seed) in [(2usize, 7u64), (5, 11), (16, 13), (33, 17)] {
            let m = pseudo_hermitian(n, seed);
            let eig = m.eigh().unwrap();
            let rebuilt = eig.reconstruct();
            let rel = m.max_abs_diff(&rebuilt) / m.frobenius_norm();
            assert!(rel < 1e-12, "n={n}: relative residual {rel}");
            let sum: f64 = eig.eigenvalues.iter().sum();
            assert!((sum - m.trace().re).abs() < 1e-10 * n as f64);
        }
    }

    #[test]
    fn eigh_handles_256() {
        let m = pseudo_hermitian(256, 23);
        let eig = m.eigh().unwrap();
        let rebuilt = eig.reconstruct();
        let rel = m.max_abs_diff(&rebuilt) / m.frobenius_norm();
        assert!(rel < 1e-10, "relative residual {rel}");
        // Eigenvector orthonormality.
        let v = &eig.eigenvectors;
        let g = &v.dagger() * v;
        assert!(g.approx_eq(&ComplexMatrix::identity(256), 1e-10));
    }

    /// det(M - lambda I) for real symmetric input, by Gaussian elimination.
    /// Test-local oracle, independent of the Jacobi path.
    fn char_poly_det(m: &ComplexMatrix, lambda: f64) -> f64 {
        let n = m.rows();
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].re - if i == j { lambda } else { 0.0 }).collect())
            .collect();
        let mut det = 1.0f64;
        for col in 0..n {
            let (mut piv, mut mag) = (col, a[col][col].abs());
            for r in col + 1..n {
                if a[r][col].abs() > mag {
                    piv = r;
                    mag = a[r][col].abs();
                }
            }
            if mag == 0.0 {
                return 0.0;
            }
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            det *= a[col][col];
            for r in col + 1..n {
                let f = a[r][col] / a[col][col];
                for j in col..n {
                    a[r][j] -= f * a[col][j];
                }
            }
        }
        det
    }

    #[test]
    fn min_eigenvalue_against_char_poly_oracle() {
        // Reshuffled positivity matrix of the kappa=1 all-ones-row map; its
        // smallest eigenvalue is the lowest root of lambda^4 - 2l^3 - 3l^2 + 2l.
        let b = ComplexMatrix::from_real(&[
            &[1.0, 1.0, 1.0, 0.0],
            &[1.0, 1.0, 1.0, 0.0],
            &[1.0, 1.0, 0.0, -1.0],
            &[0.0, 0.0, -1.0, 0.0],
        ]);
        // Walk up from a Gershgorin lower bound to bracket the first root.
        let mut lo = -5.0;
        let mut hi = lo;
        let step = 1e-3;
        while char_poly_det(&b, hi) > 0.0 {
            hi += step;
            assert!(hi < 5.0, "no sign change found");
        }
        lo = hi - step;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if char_poly_det(&b, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let got = b.min_eigenvalue().unwrap();
        assert!(oracle < -1.0, "spectrum should dip well below zero");
        assert!((got - oracle).abs() < 1e-9, "{got} vs oracle {oracle}");
    }

    #[test]
    fn inverse_round_trip() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 1.0), c(3.0, 0.0)],
            vec![c(1.0, -1.0), c(0.0, 0.0), c(1.0, 2.0)],
        ]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).approx_eq(&ComplexMatrix::identity(3), 1e-12));
    }

    #[test]
    fn inverse_detects_singular() {
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(m.inverse(), Err(MatrixError::Singular)));
    }
}
