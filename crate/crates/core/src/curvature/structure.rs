//! Z-matrix, Perron and minimum-entry checks behind the lower bound `κ ≥ ½`
//! for `H ≤ 1/2`.

use rayon::prelude::*;
use serde::Serialize;

use super::pencil_bottom;
use crate::error::{Error, Result};
use crate::matrices::{build_r, cholesky, hadamard_power, inverse_times};

/// An off-diagonal entry above this fails the Z-matrix test.
pub const ZMATRIX_TOL: f64 = 1e-10;

/// Entries below `−NEG_REL·‖v‖∞` count as negative in the Perron check.
const NEG_REL: f64 = 1e-8;

/// Cholesky entries below `−CHOL_REL·max|L|` count as negative.
const CHOL_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZMatrixRow {
    pub h: f64,
    pub n: usize,
    /// Largest off-diagonal entry of `R_H^{-1} R_H^{∘2}`.
    pub max_offdiag: f64,
    /// Largest strictly upper-triangular entry.
    pub max_upper: f64,
    pub pass: bool,
    /// Whether the Cholesky factor of `R_H` has no negative entries.
    pub cholesky_nonneg: bool,
}

pub fn zmatrix_point(h: f64, n: usize) -> Result<ZMatrixRow> {
    if n < 2 {
        return Err(Error::Domain(format!("Z-matrix check needs N >= 2, got {n}")));
    }
    let r = build_r(h, n)?;
    let m = inverse_times(&r, &hadamard_power(&r, 2))?;
    let mut max_upper = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            max_upper = max_upper.max(m.get(i, j));
        }
    }
    let max_offdiag = m.max_offdiag();
    let l = cholesky(&r)?;
    let scale = l.diag().iter().fold(0.0f64, |a, &d| a.max(d.abs()));
    let cholesky_nonneg = (0..n).all(|i| (0..=i).all(|j| l.get(i, j) >= -CHOL_REL * scale.max(1.0)));
    Ok(ZMatrixRow { h, n, max_offdiag, max_upper, pass: max_offdiag <= ZMATRIX_TOL, cholesky_nonneg })
}

/// Every `(H, N)` with `H` from the grid and `2 <= N <= n_max`, ordered by
/// `H` then `N`.
pub fn zmatrix_scan(hs: &[f64], n_max: usize) -> Result<Vec<ZMatrixRow>> {
    if n_max < 2 {
        return Err(Error::Domain(format!("Z-matrix scan needs N_max >= 2, got {n_max}")));
    }
    let points: Vec<(f64, usize)> = hs
        .iter()
        .flat_map(|&h| (2..=n_max).map(move |n| (h, n)))
        .collect();
    points.par_iter().map(|&(h, n)| zmatrix_point(h, n)).collect()
}

pub(crate) fn negative_entries(v: &[f64]) -> usize {
    let (imax, vmax) = v
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, &x)| if x.abs() > bv { (i, x.abs()) } else { (bi, bv) });
    let sign = if v[imax] < 0.0 { -1.0 } else { 1.0 };
    v.iter().filter(|&&x| sign * x < -NEG_REL * vmax).count()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronCheck {
    pub h: f64,
    pub n: usize,
    pub nonnegative: bool,
    /// Entries of opposite sign to the dominant one, after the sign is fixed
    /// so that the largest-magnitude entry is positive.
    pub sign_changes: usize,
    pub vector: Vec<f64>,
}

/// Sign structure of the minimizing vector of `(R_H^{∘2}, R_H)`.
pub fn perron_check(h: f64, n: usize) -> Result<PerronCheck> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Domain(format!("Hurst index must lie in (0,1), got {h}")));
    }
    let (_, v) = pencil_bottom(2.0 * h, n, true)?;
    let mut v = v.expect("vector requested");
    let imax = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if v[imax] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let sign_changes = negative_entries(&v);
    Ok(PerronCheck { h, n, nonnegative: sign_changes == 0, sign_changes, vector: v })
}

/// `min_{n ≤ m ≤ N} R_H(n,m)`; only meaningful for `H ≤ 1/2`.
pub fn min_entry_bound(h: f64, n: usize) -> Result<f64> {
    if h > 0.5 {
        return Err(Error::Domain(format!("minimum-entry bound needs H <= 1/2, got {h}")));
    }
    let r = build_r(h, n)?;
    Ok(r.as_slice().iter().copied().fold(f64::INFINITY, f64::min))
}
