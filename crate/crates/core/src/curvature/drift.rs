//! Cauchy-point curvature under the drift `b(x) = −ω² sin x`.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigensolve::gen_eigen_spd;
use crate::error::{Error, Result};
use crate::matrices::{build_r, hadamard_power, SymMatrix};
use crate::oracle::{DriftCorrection, TrigPoly};

/// Size of the uniform `x` grid for the global minimum. It is even, so `π`
/// is a grid point.
pub const DRIFT_GRID: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftSpectrumReport {
    pub omega_sq: f64,
    pub n: usize,
    /// Angle reduced to `[0, 2π)`.
    pub x: f64,
    pub eigenvalues: Vec<f64>,
    /// Largest `|λ_k − (2k−1) − (ω²/2) cos x|`.
    pub max_deviation: f64,
    pub global_kappa: f64,
    /// Grid point where the global minimum is attained.
    pub argmin_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalDriftKappa {
    pub kappa: f64,
    pub argmin_x: f64,
    pub grid_size: usize,
}

fn check(omega_sq: f64, n: usize) -> Result<()> {
    if !(omega_sq >= 0.0) || !omega_sq.is_finite() {
        return Err(Error::Domain(format!("omega^2 must be >= 0, got {omega_sq}")));
    }
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    Ok(())
}

struct DriftPencil {
    r: SymMatrix,
    r2: SymMatrix,
    dc: DriftCorrection,
}

impl DriftPencil {
    fn new(omega_sq: f64, n: usize) -> Result<Self> {
        let r = build_r(0.5, n)?;
        let r2 = hadamard_power(&r, 2);
        Ok(Self { r, r2, dc: DriftCorrection::new(omega_sq, n) })
    }

    fn eigenvalues(&self, x: f64) -> Result<Vec<f64>> {
        let n = self.r.n();
        let d = self.dc.hermitian_at(x);
        let shifted = SymMatrix::from_upper_fn(n, |i, j| self.r2.get(i, j) + d[i * n + j].re);
        Ok(gen_eigen_spd(&shifted, &self.r, false)?.values)
    }

    fn global(&self, grid_size: usize) -> Result<GlobalDriftKappa> {
        let grid = TrigPoly::grid(grid_size);
        let mins: Vec<f64> = grid
            .par_iter()
            .map(|&x| self.eigenvalues(x).map(|v| v[0]))
            .collect::<Result<_>>()?;
        let (j, &kappa) = mins
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("grid is non-empty");
        Ok(GlobalDriftKappa { kappa, argmin_x: grid[j], grid_size })
    }
}

/// `min_x κ(x)` over a uniform grid of `grid_size` points.
pub fn global_drift_kappa(omega_sq: f64, n: usize, grid_size: usize) -> Result<GlobalDriftKappa> {
    check(omega_sq, n)?;
    if grid_size == 0 {
        return Err(Error::Domain("x grid must be non-empty".into()));
    }
    DriftPencil::new(omega_sq, n)?.global(grid_size)
}

/// Spectrum of `(R^{∘2} + D₀(x), R)` at `γ = 1`, with the global minimum
/// over [`DRIFT_GRID`] points.
pub fn drift_spectrum(omega_sq: f64, n: usize, x: f64) -> Result<DriftSpectrumReport> {
    check(omega_sq, n)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let x = x.rem_euclid(std::f64::consts::TAU);
    let pencil = DriftPencil::new(omega_sq, n)?;
    let eigenvalues = pencil.eigenvalues(x)?;
    let shift = 0.5 * omega_sq * x.cos();
    let max_deviation = eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &l)| (l - (2 * k + 1) as f64 - shift).abs())
        .fold(0.0, f64::max);
    let global = pencil.global(DRIFT_GRID)?;
    Ok(DriftSpectrumReport {
        omega_sq,
        n,
        x,
        eigenvalues,
        max_deviation,
        global_kappa: global.kappa,
        argmin_x: global.argmin_x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_case_is_odd_integers() {
        let r = drift_spectrum(0.0, 5, 1.234).unwrap();
        for (k, l) in r.eigenvalues.iter().enumerate() {
            assert!((l - (2 * k + 1) as f64).abs() < 1e-9);
        }
        assert!((r.global_kappa - 1.0).abs() < 1e-9);
    }

    #[test]
    fn shift_at_pi() {
        let r = drift_spectrum(1.0, 4, PI).unwrap();
        for (l, want) in r.eigenvalues.iter().zip([0.5, 2.5, 4.5, 6.5]) {
            assert!((l - want).abs() < 1e-9);
        }
        assert!(r.max_deviation < 1e-9);
        assert!((r.global_kappa - 0.5).abs() < 1e-9);
    }

    #[test]
    fn global_minimum_is_at_pi() {
        let g = global_drift_kappa(1.5, 6, 64).unwrap();
        assert_eq!(g.argmin_x, PI);
        assert!((g.kappa - 0.25).abs() < 1e-9);
        assert!(global_drift_kappa(1.0, 3, 0).is_err());
        assert!(drift_spectrum(-1.0, 3, 0.0).is_err());
    }
}
