//! Curvature on real polynomials, where positive and negative frequencies
//! are tied together by conjugate symmetry.
//!
//! Two numbers are reported. The pencil value drops the conjugacy constraint
//! and takes the bottom of `(Ψ^{∘2}, Ψ)` on frequencies `±1..±N`. The
//! constrained value minimizes `Γ₂(f,f)(x)/Γ(f,f)(x)` over real `f` given by
//! their cosine and sine coefficients, by gradient descent from random
//! starts. No ordering between the two is assumed.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::eigensolve::{gen_eigen_psd, DEFAULT_DEFLATION_TOL};
use crate::error::{Error, Result};
use crate::kernels::{psi, StableParams};
use crate::matrices::{hadamard_power, SymMatrix};
use crate::rng::{stream, DEFAULT_SEED};

/// Restarts may disagree by at most this much.
pub const RESTART_SPREAD_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealCurvatureOptions {
    pub restarts: usize,
    /// Restart `i` evaluates the ratio at `x = 2π·(i mod x_points)/x_points`.
    pub x_points: usize,
    /// Stop once the ratio moves by less than this between iterations.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for RealCurvatureOptions {
    fn default() -> Self {
        Self { restarts: 20, x_points: 16, tol: 1e-8, max_iter: 5000, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealCurvature {
    pub gamma: f64,
    pub n: usize,
    pub pencil_kappa: f64,
    /// Dimension kept after deflating the null space of `Ψ`.
    pub retained_dim: usize,
    pub constrained_kappa: f64,
    pub restart_spread: f64,
    pub max_iterations: usize,
}

/// `Ψ_γ(ξ,η)` on the frequency list `−N, …, −1, 1, …, N`.
fn mixed_kernel(p: &StableParams, n: usize) -> SymMatrix {
    let freq = |i: usize| -> f64 {
        if i < n {
            i as f64 - n as f64
        } else {
            (i - n + 1) as f64
        }
    };
    SymMatrix::from_upper_fn(2 * n, |i, j| psi(p, freq(i), freq(j)))
}

/// `(Q₂, Q₁)` with `Γ₂(f,f)(x) = vᵀQ₂v` and `Γ(f,f)(x) = vᵀQ₁v` for
/// `f = Σ c_k cos kx + s_k sin kx` and `v = (c_1, …, c_N, s_1, …, s_N)`.
pub fn real_pencil_at(gamma: f64, n: usize, x: f64) -> Result<(SymMatrix, SymMatrix)> {
    let p = StableParams::new(gamma)?;
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let k1 = mixed_kernel(&p, n);
    let k2 = hadamard_power(&k1, 2);
    // Column `a` of the coefficient map has two entries: (row, value).
    let column = |a: usize| -> [(usize, Complex64); 2] {
        let k = a % n + 1;
        let pos = n + k - 1;
        let neg = n - k;
        let ep = Complex64::from_polar(0.5, k as f64 * x);
        let em = ep.conj();
        if a < n {
            [(pos, ep), (neg, em)]
        } else {
            let i = Complex64::new(0.0, 1.0);
            [(pos, -i * ep), (neg, i * em)]
        }
    };
    let form = |k: &SymMatrix| {
        SymMatrix::from_upper_fn(2 * n, |a, b| {
            let mut s = Complex64::default();
            for (r, ta) in column(a) {
                for (c, tb) in column(b) {
                    s += ta.conj() * k.get(r, c) * tb;
                }
            }
            s.re
        })
    };
    Ok((form(&k2), form(&k1)))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn scale_to_unit(q1: &SymMatrix, v: &mut [f64]) {
    let s = q1.quad_form(v).sqrt();
    v.iter_mut().for_each(|x| *x /= s);
}

/// Minimizes `vᵀQ₂v / vᵀQ₁v` from `v`. Each step moves to the best point of
/// `span{v, ∇, previous step}` and renormalizes to `vᵀQ₁v = 1`.
fn descend(q2: &SymMatrix, q1: &SymMatrix, mut v: Vec<f64>, tol: f64, max_iter: usize) -> Result<(f64, usize)> {
    scale_to_unit(q1, &mut v);
    let mut rho = q2.quad_form(&v);
    let mut prev: Option<Vec<f64>> = None;
    for it in 1..=max_iter {
        let q2v = q2.mul_vec(&v);
        let q1v = q1.mul_vec(&v);
        let mut grad: Vec<f64> = q2v.iter().zip(&q1v).map(|(a, b)| a - rho * b).collect();
        if dot(&grad, &grad).sqrt() <= 1e-14 * dot(&q2v, &q2v).sqrt() {
            return Ok((rho, it));
        }
        scale_to_unit(q1, &mut grad);
        let mut basis = vec![v.clone(), grad];
        if let Some(mut p) = prev.take() {
            if q1.quad_form(&p) > 0.0 {
                scale_to_unit(q1, &mut p);
                basis.push(p);
            }
        }
        let k = basis.len();
        let q2b: Vec<Vec<f64>> = basis.iter().map(|b| q2.mul_vec(b)).collect();
        let q1b: Vec<Vec<f64>> = basis.iter().map(|b| q1.mul_vec(b)).collect();
        let a = SymMatrix::from_upper_fn(k, |i, j| dot(&basis[i], &q2b[j]));
        let b = SymMatrix::from_upper_fn(k, |i, j| dot(&basis[i], &q1b[j]));
        let s = gen_eigen_psd(&a, &b, 1e-12)?;
        let y = s.min_vector().expect("psd solver returns vectors");
        let mut step = vec![0.0; v.len()];
        for (yi, bi) in y.iter().zip(&basis).skip(1) {
            for (s, x) in step.iter_mut().zip(bi) {
                *s += yi * x;
            }
        }
        let mut next: Vec<f64> = v.iter().zip(&step).map(|(vi, si)| y[0] * vi + si).collect();
        scale_to_unit(q1, &mut next);
        let new_rho = q2.quad_form(&next);
        let moved = rho - new_rho;
        v = next;
        rho = new_rho;
        prev = Some(step);
        if moved.abs() <= tol * 1e-6 * rho.abs().max(1.0) {
            return Ok((rho, it));
        }
    }
    Err(Error::ConvergenceFailure { iterations: max_iter })
}

pub fn real_curvature(gamma: f64, n: usize, opts: &RealCurvatureOptions) -> Result<RealCurvature> {
    let p = StableParams::new(gamma)?;
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if opts.restarts == 0 || opts.x_points == 0 {
        return Err(Error::Domain("need at least one restart and one x point".into()));
    }
    let k1 = mixed_kernel(&p, n);
    let pencil = gen_eigen_psd(&hadamard_power(&k1, 2), &k1, DEFAULT_DEFLATION_TOL)?;

    let mut values = Vec::with_capacity(opts.restarts);
    let mut max_iterations = 0;
    let mut forms: Vec<Option<(SymMatrix, SymMatrix)>> = vec![None; opts.x_points];
    for r in 0..opts.restarts {
        let xi = r % opts.x_points;
        if forms[xi].is_none() {
            let x = xi as f64 * std::f64::consts::TAU / opts.x_points as f64;
            forms[xi] = Some(real_pencil_at(gamma, n, x)?);
        }
        let (q2, q1) = forms[xi].as_ref().expect("just filled");
        let mut rng = stream(opts.seed, r as u64);
        let v0: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (rho, iters) = descend(q2, q1, v0, opts.tol, opts.max_iter)?;
        values.push(rho);
        max_iterations = max_iterations.max(iters);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    if spread > RESTART_SPREAD_TOL {
        return Err(Error::OptimizationStall { spread, tolerance: RESTART_SPREAD_TOL });
    }
    Ok(RealCurvature {
        gamma,
        n,
        pencil_kappa: pencil.min(),
        retained_dim: pencil.retained_dim,
        constrained_kappa: lo,
        restart_spread: spread,
        max_iterations,
    })
}
