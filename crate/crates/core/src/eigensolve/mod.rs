//! Symmetric and symmetric-definite generalized eigenproblems.
//!
//! Every curvature number in the crate is the bottom of a pencil `(A, B)`
//! solved here. The production path is Householder + implicit QL; cyclic
//! Jacobi is kept as an independent check for `n <= 8`.

mod jacobi;
mod ql;

use crate::error::{Error, Result};
use crate::matrices::{cholesky, SymMatrix};

/// Default relative cut-off for dropping near-null directions of `B`.
pub const DEFAULT_DEFLATION_TOL: f64 = 1e-10;

/// Ascending eigenvalues, optionally with unit-norm eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
    /// `max ‖Av − λBv‖ / ‖v‖` over returned pairs; present with vectors.
    pub residual: Option<f64>,
    /// Dimension of the subspace the pencil was solved on.
    pub retained_dim: usize,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn min_vector(&self) -> Option<&[f64]> {
        self.vectors.as_ref().map(|v| v[0].as_slice())
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn columns(n_rows: usize, n_cols: usize, data: &[f64]) -> Vec<Vec<f64>> {
    (0..n_cols)
        .map(|k| (0..n_rows).map(|r| data[r * n_cols + k]).collect())
        .collect()
}

fn residual(a: &SymMatrix, b: Option<&SymMatrix>, values: &[f64], vectors: &[Vec<f64>]) -> f64 {
    values
        .iter()
        .zip(vectors)
        .map(|(&lam, v)| {
            let av = a.mul_vec(v);
            let bv = match b {
                Some(b) => b.mul_vec(v),
                None => v.clone(),
            };
            let r: Vec<f64> = av.iter().zip(&bv).map(|(x, y)| x - lam * y).collect();
            norm(&r) / norm(v)
        })
        .fold(0.0, f64::max)
}

/// Standard symmetric eigenproblem via tridiagonalisation and QL.
pub fn sym_eigen(a: &SymMatrix, want_vectors: bool) -> Result<Spectrum> {
    let n = a.n();
    let dec = ql::decompose(n, a.as_slice(), want_vectors)?;
    let vectors = dec.vecs.map(|v| columns(n, n, &v));
    let residual = vectors.as_ref().map(|v| residual(a, None, &dec.values, v));
    Ok(Spectrum { values: dec.values, vectors, residual, retained_dim: n })
}

/// Cyclic-Jacobi solve, limited to `n <= 8`. Always returns vectors.
pub fn sym_eigen_jacobi(a: &SymMatrix) -> Result<Spectrum> {
    let n = a.n();
    let (values, vecs) = jacobi::decompose(n, a.as_slice())?;
    let vectors = columns(n, n, &vecs);
    let residual = Some(residual(a, None, &values, &vectors));
    Ok(Spectrum { values, vectors: Some(vectors), residual, retained_dim: n })
}

/// `Av = λBv` with `B` positive definite.
///
/// With `B = LLᵀ` the pencil is congruent to the standard problem for
/// `C = L⁻¹AL⁻ᵀ`; eigenvectors are mapped back by `v = L⁻ᵀy` and rescaled to
/// unit Euclidean norm.
pub fn gen_eigen_spd(a: &SymMatrix, b: &SymMatrix, want_vectors: bool) -> Result<Spectrum> {
    let n = a.n();
    if b.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.n() });
    }
    let l = cholesky(b)?;

    // X = L⁻¹A, column by column; then C = L⁻¹Xᵀ.
    let mut x = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        col.copy_from_slice(a.row(j)); // column j of symmetric A
        l.solve_lower(&mut col);
        for i in 0..n {
            x[i * n + j] = col[i];
        }
    }
    let mut c = vec![0.0; n * n];
    for j in 0..n {
        col.copy_from_slice(&x[j * n..(j + 1) * n]); // column j of Xᵀ
        l.solve_lower(&mut col);
        for i in 0..n {
            c[i * n + j] = col[i];
        }
    }
    let c = SymMatrix::from_row_major(n, &c)?;

    let dec = ql::decompose(n, c.as_slice(), want_vectors)?;
    let vectors = dec.vecs.map(|y| {
        columns(n, n, &y)
            .into_iter()
            .map(|mut v| {
                l.solve_upper(&mut v);
                let s = norm(&v);
                v.iter_mut().for_each(|x| *x /= s);
                v
            })
            .collect::<Vec<_>>()
    });
    let residual = vectors.as_ref().map(|v| residual(a, Some(b), &dec.values, v));
    Ok(Spectrum { values: dec.values, vectors, residual, retained_dim: n })
}

/// `Av = λBv` with `B` only positive semidefinite.
///
/// Directions of `B` with eigenvalue `<= deflation_tol·λ_max(B)` are dropped
/// and the pencil is solved on the retained range of `B`.
pub fn gen_eigen_psd(a: &SymMatrix, b: &SymMatrix, deflation_tol: f64) -> Result<Spectrum> {
    let n = a.n();
    if b.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.n() });
    }
    let eb = sym_eigen(b, true)?;
    let lam_max = *eb.values.last().unwrap();
    if !(lam_max > 0.0) {
        return Err(Error::DegeneratePencil);
    }
    let cut = deflation_tol * lam_max;
    let qs = eb.vectors.as_ref().unwrap();
    // W = Q_r Λ_r^{-1/2}, one column per retained direction.
    let w: Vec<Vec<f64>> = eb
        .values
        .iter()
        .zip(qs)
        .filter(|(&lam, _)| lam > cut)
        .map(|(&lam, q)| q.iter().map(|x| x / lam.sqrt()).collect())
        .collect();
    let r = w.len();
    if r == 0 {
        return Err(Error::DegeneratePencil);
    }

    let aw: Vec<Vec<f64>> = w.iter().map(|wk| a.mul_vec(wk)).collect();
    let c = SymMatrix::from_upper_fn(r, |i, j| w[i].iter().zip(&aw[j]).map(|(x, y)| x * y).sum());
    let dec = ql::decompose(r, c.as_slice(), true)?;
    let ys = columns(r, r, dec.vecs.as_ref().unwrap());
    let vectors: Vec<Vec<f64>> = ys
        .iter()
        .map(|y| {
            let mut v = vec![0.0; n];
            for (yk, wk) in y.iter().zip(&w) {
                for (vi, wi) in v.iter_mut().zip(wk) {
                    *vi += yk * wi;
                }
            }
            let s = norm(&v);
            v.iter_mut().for_each(|x| *x /= s);
            v
        })
        .collect();
    let residual = Some(residual(a, Some(b), &dec.values, &vectors));
    Ok(Spectrum { values: dec.values, vectors: Some(vectors), residual, retained_dim: r })
}
