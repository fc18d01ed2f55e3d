//! Curvature constants and the structural checks built on them.
//!
//! `κ(γ,N)` is the bottom of the pencil `(R_H^{∘2}, R_H)` with `H = γ/2` on
//! positive-frequency polynomials of degree `N`. At `γ = 1` the product
//! `R^{-1}R^{∘2}` is an integer upper-triangular matrix with diagonal
//! `1, 3, …, 2N−1`, and that exact form is used instead of a float solve.
//!
//! Sweeps run their independent points on the rayon pool and collect results
//! in input order; each point is computed sequentially, so output is the
//! same for any thread count.

mod contraction;
mod drift;
mod real;
mod structure;

pub use contraction::{contraction_profile, ContractionProfile, EXACT_DOUBLE_FACTORIAL_MAX};
pub use drift::{drift_spectrum, global_drift_kappa, DriftSpectrumReport, GlobalDriftKappa, DRIFT_GRID};
pub use real::{real_curvature, real_pencil_at, RealCurvature, RealCurvatureOptions};
pub use structure::{
    min_entry_bound, perron_check, zmatrix_point, zmatrix_scan, PerronCheck, ZMatrixRow, ZMATRIX_TOL,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::eigensolve::gen_eigen_spd;
use crate::error::{Error, Result};
use crate::kernels::{alpha_coeff, StableParams};
use crate::matrices::{build_m_exact, build_r, hadamard_power, inverse_times};

/// Default `N` at which the large-`N` value of `κ(γ)` is reported.
pub const DEFAULT_N_MAX: usize = 300;

/// Decrements below this are treated as numerical zeros by the decay fit.
pub const DECAY_FLOOR: f64 = 1e-14;

/// Fewest decrements the decay fit accepts.
pub const DECAY_MIN_POINTS: usize = 10;

/// `ε` grid used for the quadratic coefficient at the Cauchy point.
pub const DEFAULT_EPS_GRID: [f64; 6] = [0.02, 0.04, 0.06, 0.08, 0.10, 0.12];

/// Named boolean checks attached to a [`CurvatureReport`]. The two matrix
/// checks are only filled in by [`kappa`], not by sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureFlags {
    pub z_matrix_pass: Option<bool>,
    pub perron_nonneg: Option<bool>,
    pub below_one: bool,
    pub above_half: bool,
}

impl CurvatureFlags {
    fn from_kappa(kappa: f64) -> Self {
        Self {
            z_matrix_pass: None,
            perron_nonneg: None,
            below_one: kappa < 1.0 - 1e-12,
            above_half: kappa >= 0.5 - 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub gamma: f64,
    pub n: usize,
    pub kappa: f64,
    pub minimizing_vector: Option<Vec<f64>>,
    /// `κ(γ,N−1) − κ(γ,N)`.
    pub decrement: Option<f64>,
    pub flags: CurvatureFlags,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("N must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Bottom of the pencil, with its unit eigenvector if requested.
pub(crate) fn pencil_bottom(gamma: f64, n: usize, want_vector: bool) -> Result<(f64, Option<Vec<f64>>)> {
    let p = StableParams::new(gamma)?;
    check_n(n)?;
    if p.is_cauchy() {
        let m = build_m_exact(n)?;
        let kappa = *m.diagonal().iter().min().expect("n >= 1") as f64;
        // The diagonal is increasing, so the bottom eigenvector is e_1.
        let v = want_vector.then(|| {
            let mut e = vec![0.0; n];
            e[0] = 1.0;
            e
        });
        return Ok((kappa, v));
    }
    let r = build_r(p.hurst(), n)?;
    let s = gen_eigen_spd(&hadamard_power(&r, 2), &r, want_vector)?;
    let v = s.min_vector().map(<[f64]>::to_vec);
    Ok((s.min(), v))
}

/// `κ(γ,N)` with its minimizing vector and flags.
pub fn kappa(gamma: f64, n: usize) -> Result<CurvatureReport> {
    let (kappa, vector) = pencil_bottom(gamma, n, true)?;
    let decrement = if n >= 2 {
        Some(pencil_bottom(gamma, n - 1, false)?.0 - kappa)
    } else {
        None
    };
    let h = gamma / 2.0;
    let z_matrix_pass = if gamma == 1.0 {
        true
    } else {
        let r = build_r(h, n)?;
        inverse_times(&r, &hadamard_power(&r, 2))?.max_offdiag() <= ZMATRIX_TOL
    };
    let vector = vector.expect("vector requested");
    let perron_nonneg = structure::negative_entries(&vector) == 0;
    let mut flags = CurvatureFlags::from_kappa(kappa);
    flags.z_matrix_pass = Some(z_matrix_pass);
    flags.perron_nonneg = Some(perron_nonneg);
    Ok(CurvatureReport { gamma, n, kappa, minimizing_vector: Some(vector), decrement, flags })
}

fn kappa_values(gamma: f64, ns: &[usize]) -> Result<Vec<f64>> {
    ns.par_iter()
        .map(|&n| pencil_bottom(gamma, n, false).map(|(k, _)| k))
        .collect()
}

/// Reports for `N = 1..=n_max`, each with its decrement from `N−1`.
pub fn kappa_sequence(gamma: f64, n_max: usize) -> Result<Vec<CurvatureReport>> {
    if n_max < 2 {
        return Err(Error::Domain(format!("kappa_sequence needs N_max >= 2, got {n_max}")));
    }
    let ns: Vec<usize> = (1..=n_max).collect();
    let ks = kappa_values(gamma, &ns)?;
    Ok(ns
        .iter()
        .zip(&ks)
        .enumerate()
        .map(|(i, (&n, &kappa))| CurvatureReport {
            gamma,
            n,
            kappa,
            minimizing_vector: None,
            decrement: (i > 0).then(|| ks[i - 1] - kappa),
            flags: CurvatureFlags::from_kappa(kappa),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub gamma: f64,
    /// Negated slope of `ln δ_N` against `ln N`.
    pub exponent: f64,
    pub intercept: f64,
    pub usable: usize,
    pub total: usize,
    /// Smallest decrement seen, including excluded ones.
    pub min_decrement: f64,
}

/// Ordinary least squares `y ≈ a + b·x`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

/// Power-law decay rate of `δ_N = κ(γ,N−1) − κ(γ,N)` over `n_lo..=n_hi`.
pub fn decay_exponent_fit(gamma: f64, n_lo: usize, n_hi: usize) -> Result<DecayFit> {
    if n_lo < 2 || n_hi < 10 * n_lo {
        return Err(Error::Domain(format!(
            "decay fit needs 2 <= N_lo and a full decade, got {n_lo}..{n_hi}"
        )));
    }
    let ns: Vec<usize> = (n_lo - 1..=n_hi).collect();
    let ks = kappa_values(gamma, &ns)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut min_decrement = f64::INFINITY;
    for i in 1..ns.len() {
        let d = ks[i - 1] - ks[i];
        min_decrement = min_decrement.min(d);
        if d >= DECAY_FLOOR {
            xs.push((ns[i] as f64).ln());
            ys.push(d.ln());
        }
    }
    if xs.len() < DECAY_MIN_POINTS {
        return Err(Error::InsufficientData { usable: xs.len(), required: DECAY_MIN_POINTS });
    }
    let (intercept, slope) = linear_fit(&xs, &ys);
    Ok(DecayFit { gamma, exponent: -slope, intercept, usable: xs.len(), total: ns.len() - 1, min_decrement })
}

/// Which side of `γ = 1` the quadratic fit samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `γ = 1 + ε`.
    Right,
    /// `γ = 1 − ε`.
    Left,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticFit {
    pub side: Side,
    pub n: usize,
    /// Extrapolated `lim_{ε→0} (1 − κ)/ε²`.
    pub c: f64,
    pub slope: f64,
    pub epsilons: Vec<f64>,
    pub kappas: Vec<f64>,
}

/// Fits `(1 − κ(1±ε, N))/ε² ≈ c + b·ε` and reports `c`.
pub fn quadratic_fit_c(epsilons: &[f64], n: usize, side: Side) -> Result<QuadraticFit> {
    if n < 100 {
        return Err(Error::Domain(format!("quadratic fit needs N >= 100, got {n}")));
    }
    if let Some(e) = epsilons.iter().find(|&&e| !(e > 0.0 && e <= 0.15)) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 0.15], got {e}")));
    }
    let distinct = epsilons.iter().any(|&e| e != epsilons[0]);
    if epsilons.len() < 2 || !distinct {
        return Err(Error::InsufficientData { usable: usize::from(!epsilons.is_empty()), required: 2 });
    }
    let sign = match side {
        Side::Right => 1.0,
        Side::Left => -1.0,
    };
    let kappas: Vec<f64> = epsilons
        .par_iter()
        .map(|&e| pencil_bottom(1.0 + sign * e, n, false).map(|(k, _)| k))
        .collect::<Result<_>>()?;
    let ys: Vec<f64> = epsilons.iter().zip(&kappas).map(|(e, k)| (1.0 - k) / (e * e)).collect();
    let (c, slope) = linear_fit(epsilons, &ys);
    Ok(QuadraticFit { side, n, c, slope, epsilons: epsilons.to_vec(), kappas })
}

/// `κ₁(γ) = inf_x Γ₂/Γ` for a single mode `cos x`.
pub fn single_mode_kappa(gamma: f64) -> Result<f64> {
    StableParams::new(gamma)?;
    let a = alpha_coeff(gamma);
    Ok(if a >= 0.0 { (1.0 + a * a) / (1.0 + a) } else { 1.0 + a })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandscapeRow {
    pub gamma: f64,
    pub n: usize,
    pub kappa: f64,
    pub kappa_single_mode: f64,
}

/// `κ(γ,N)` and `κ₁(γ)` across a grid of `γ`, in grid order.
pub fn landscape(gammas: &[f64], n: usize) -> Result<Vec<LandscapeRow>> {
    gammas
        .par_iter()
        .map(|&gamma| {
            let (kappa, _) = pencil_bottom(gamma, n, false)?;
            Ok(LandscapeRow { gamma, n, kappa, kappa_single_mode: single_mode_kappa(gamma)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_point_is_exactly_one() {
        let r = kappa(1.0, 25).unwrap();
        assert_eq!(r.kappa, 1.0);
        assert_eq!(r.decrement, Some(0.0));
        assert_eq!(r.flags.z_matrix_pass, Some(true));
        assert_eq!(r.flags.perron_nonneg, Some(true));
        assert!(!r.flags.below_one);
        // The float pencil agrees with the exact value.
        let rr = build_r(0.5, 25).unwrap();
        let s = gen_eigen_spd(&hadamard_power(&rr, 2), &rr, false).unwrap();
        assert!((s.min() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_mode_pencil_is_trivial() {
        for g in [0.3, 1.0, 1.7] {
            let r = kappa(g, 1).unwrap();
            assert!((r.kappa - 1.0).abs() < 1e-14);
            assert!(r.decrement.is_none());
        }
    }

    #[test]
    fn off_cauchy_is_strictly_below_one() {
        for g in [0.5, 0.999, 1.001, 1.5] {
            let r = kappa(g, 2).unwrap();
            assert!(r.kappa < 1.0, "gamma={g}");
            assert!(r.flags.below_one);
        }
    }

    #[test]
    fn sequence_is_monotone() {
        for g in [0.6, 1.0, 1.4] {
            let seq = kappa_sequence(g, 40).unwrap();
            assert_eq!(seq.len(), 40);
            for r in &seq[1..] {
                assert!(r.decrement.unwrap() >= -1e-10);
            }
        }
        assert!(kappa_sequence(1.2, 1).is_err());
    }

    #[test]
    fn decay_fit_at_cauchy_point_has_no_data() {
        assert!(matches!(
            decay_exponent_fit(1.0, 5, 50),
            Err(Error::InsufficientData { usable: 0, .. })
        ));
        assert!(decay_exponent_fit(1.5, 5, 20).is_err());
    }

    #[test]
    fn quadratic_fit_rejects_bad_grids() {
        assert!(quadratic_fit_c(&[0.05], 100, Side::Right).is_err());
        assert!(quadratic_fit_c(&[0.05, 0.05], 100, Side::Right).is_err());
        assert!(quadratic_fit_c(&[0.05, 0.2], 100, Side::Right).is_err());
        assert!(quadratic_fit_c(&[0.05, 0.1], 50, Side::Right).is_err());
    }

    #[test]
    fn single_mode_kappa_values() {
        assert_eq!(single_mode_kappa(1.0).unwrap(), 1.0);
        let a = 1.0 - 0.5f64.sqrt();
        assert!((single_mode_kappa(0.5).unwrap() - (1.0 + a * a) / (1.0 + a)).abs() < 1e-15);
        assert!((single_mode_kappa(0.5).unwrap() - 0.8398113795).abs() < 1e-10);
        assert!((single_mode_kappa(1.5).unwrap() - 0.5857864376).abs() < 1e-10);
        assert!(single_mode_kappa(2.0).is_err());
    }

    #[test]
    fn landscape_peaks_at_cauchy_point() {
        let grid = [0.5, 0.8, 1.0, 1.2, 1.6];
        let rows = landscape(&grid, 30).unwrap();
        assert_eq!(rows.iter().map(|r| r.gamma).collect::<Vec<_>>(), grid);
        let best = rows.iter().max_by(|a, b| a.kappa.total_cmp(&b.kappa)).unwrap();
        assert_eq!(best.gamma, 1.0);
        assert_eq!(best.kappa, 1.0);
        for r in rows.iter().filter(|r| r.gamma != 1.0) {
            assert!(r.kappa < 1.0 - 1e-6);
        }
    }
}
