//! Dense matrices for the fBM covariance family.
//!
//! Storage is row-major `Vec<f64>` throughout. `R_{1/2}^{-1}` is tridiagonal,
//! but no banded shortcuts are taken: every `H` goes through the same path.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::kernels::fbm_covariance;
use crate::table::fmt17;

/// Real symmetric `n × n` matrix. Symmetry is exact: the lower triangle is
/// always a copy of the upper one.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds from a function evaluated on the upper triangle `i <= j` only.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    /// Builds from row-major entries, replacing `A` by `(A + Aᵀ)/2`.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        Ok(Self::from_upper_fn(n, |i, j| {
            if i == j {
                entries[i * n + i]
            } else {
                0.5 * (entries[i * n + j] + entries[j * n + i])
            }
        }))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: r.len() });
            }
            flat.extend_from_slice(r);
        }
        Self::from_row_major(n, &flat)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_upper_fn(n, |_, _| 0.0)
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self::from_upper_fn(d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_diag(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Frobenius norm; used as the scale in residual contracts.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn quad_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: f64, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix::from_upper_fn(self.n, |i, j| self.get(i, j) + s * other.get(i, j))
    }

    /// Principal submatrix on the given indices.
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_upper_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    /// `PᵀAP` for a dense square `P`.
    pub fn congruence(&self, p: &DenseMatrix) -> SymMatrix {
        assert_eq!(p.rows(), self.n);
        let ap = DenseMatrix::from_fn(self.n, p.cols(), |i, j| {
            (0..self.n).map(|k| self.get(i, k) * p.get(k, j)).sum()
        });
        SymMatrix::from_upper_fn(p.cols(), |i, j| {
            (0..self.n).map(|k| p.get(k, i) * ap.get(k, j)).sum()
        })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix { rows: self.n, cols: self.n, data: self.data.clone() }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        self.to_dense().write_csv(w)
    }
}

/// General dense matrix, used for non-symmetric products such as `A⁻¹B`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Largest entry off the main diagonal (`-inf` for 1×1).
    pub fn max_offdiag(&self) -> f64 {
        let mut m = f64::NEG_INFINITY;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    m = m.max(self.get(i, j));
                }
            }
        }
        m
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|j| fmt17(self.get(i, j))).collect();
            w.write_all(line.join(",").as_bytes())?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Cholesky factor `L` with `LLᵀ = A`, stored as a dense lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular {
    n: usize,
    data: Vec<f64>,
}

impl LowerTriangular {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `LLᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        SymMatrix::from_upper_fn(self.n, |i, j| {
            (0..=i.min(j)).map(|k| self.get(i, k) * self.get(j, k)).sum()
        })
    }

    /// True if every stored entry is `>= -tol`.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.data.iter().all(|&v| v >= -tol)
    }

    /// Solves `Ly = b` in place.
    pub fn solve_lower(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.data[i * n..i * n + i];
            let s: f64 = row.iter().zip(&b[..i]).map(|(l, y)| l * y).sum();
            b[i] = (b[i] - s) / self.get(i, i);
        }
    }

    /// Solves `Lᵀx = y` in place.
    pub fn solve_upper(&self, y: &mut [f64]) {
        let n = self.n;
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.get(k, i) * y[k];
            }
            y[i] = s / self.get(i, i);
        }
    }
}

/// Relative pivot threshold for declaring a matrix not positive definite.
pub const PIVOT_REL_TOL: f64 = 1e-12;

/// Covariance matrix `R_H(n,m)` on times `1..=N`.
pub fn build_r(h: f64, n: usize) -> Result<SymMatrix> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Domain(format!("Hurst index must lie in (0,1), got {h}")));
    }
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if h == 0.5 {
        return Ok(SymMatrix::from_upper_fn(n, |i, j| ((i + 1).min(j + 1)) as u64 as f64));
    }
    let mut err = None;
    let m = SymMatrix::from_upper_fn(n, |i, j| {
        fbm_covariance(h, (i + 1) as f64, (j + 1) as f64).unwrap_or_else(|e| {
            err = Some(e);
            f64::NAN
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(m),
    }
}

/// Entrywise `k`-th power.
pub fn hadamard_power(a: &SymMatrix, k: u32) -> SymMatrix {
    assert!(k >= 1, "Hadamard exponent must be positive");
    SymMatrix::from_upper_fn(a.n(), |i, j| a.get(i, j).powi(k as i32))
}

/// Entrywise product of two symmetric matrices of equal size.
pub fn hadamard_product(a: &SymMatrix, b: &SymMatrix) -> SymMatrix {
    assert_eq!(a.n(), b.n());
    SymMatrix::from_upper_fn(a.n(), |i, j| a.get(i, j) * b.get(i, j))
}

/// Cholesky factorisation. A pivot `<= 1e-12·max diag` is rejected.
pub fn cholesky(a: &SymMatrix) -> Result<LowerTriangular> {
    let n = a.n();
    let threshold = PIVOT_REL_TOL * a.max_diag().max(0.0);
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let row_j = &l[j * n..j * n + j];
        let d = a.get(j, j) - row_j.iter().map(|v| v * v).sum::<f64>();
        if !(d > threshold) {
            return Err(Error::NotPositiveDefinite { pivot_index: j, pivot_value: d });
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in j + 1..n {
            let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
            l[i * n + j] = (a.get(i, j) - s) / djj;
        }
    }
    Ok(LowerTriangular { n, data: l })
}

/// `ln det A` from the Cholesky diagonal.
pub fn log_det(a: &SymMatrix) -> Result<f64> {
    let l = cholesky(a)?;
    Ok(2.0 * l.diag().iter().map(|d| d.ln()).sum::<f64>())
}

/// Largest dimension accepted by [`build_m_exact`].
pub const EXACT_DIM_CAP: usize = 1_000_000;

/// `R_{1/2}^{-1} R_{1/2}^{∘2}` in exact integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCurvatureMatrix {
    n: usize,
    data: Vec<i64>,
}

impl ExactCurvatureMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Product of the diagonal, `(2N−1)!!`, or `None` on `u64` overflow.
    pub fn det(&self) -> Option<u64> {
        self.diagonal().iter().try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as f64)
    }
}

/// Computes `R_{1/2}^{-1}R_{1/2}^{∘2}` with integers.
///
/// `R_{1/2}^{-1}` is the path-graph Laplacian with a free end: row `k` is
/// `(−1, 2, −1)` except the last row `(−1, 1)`. Applying it to the columns of
/// `min(n,m)²` gives the product without any floating point.
pub fn build_m_exact(n: usize) -> Result<ExactCurvatureMatrix> {
    if n == 0 || n > EXACT_DIM_CAP {
        return Err(Error::Domain(format!("exact path needs 1 <= N <= {EXACT_DIM_CAP}, got {n}")));
    }
    let sq = |i: usize, j: usize| -> i64 {
        let v = i.min(j) as i64;
        v * v
    };
    let mut data = vec![0i64; n * n];
    for k in 1..=n {
        for m in 1..=n {
            let mut v = 2 * sq(k, m);
            if k > 1 {
                v -= sq(k - 1, m);
            }
            if k < n {
                v -= sq(k + 1, m);
            } else {
                v -= sq(k, m);
            }
            data[(k - 1) * n + (m - 1)] = v;
        }
    }
    Ok(ExactCurvatureMatrix { n, data })
}

/// Solves `AX = B` column by column through the Cholesky factor of `A`.
pub fn inverse_times(a: &SymMatrix, b: &SymMatrix) -> Result<DenseMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: b.n() });
    }
    let l = cholesky(a)?;
    let n = a.n();
    let mut out = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        for i in 0..n {
            col[i] = b.get(i, j);
        }
        l.solve_lower(&mut col);
        l.solve_upper(&mut col);
        for i in 0..n {
            out[i * n + j] = col[i];
        }
    }
    Ok(DenseMatrix { rows: n, cols: n, data: out })
}
