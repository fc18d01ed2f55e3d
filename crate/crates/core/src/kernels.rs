//! Closed-form scalar kernels.
//!
//! The carré du champ of `L = -(-Δ)^{γ/2}` acts on a pair of Fourier modes
//! through `Ψ_γ(ξ,η) = ½(|ξ|^γ + |η|^γ − |ξ−η|^γ)`. On same-sign frequencies
//! this is the fractional Brownian motion covariance with Hurst index
//! `H = γ/2`, which is what the matrix routines build on.

use serde::Serialize;

use crate::error::{Error, Result};

/// Stability index of the generator, with an optional cosine drift strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    gamma: f64,
    omega_sq: f64,
}

impl StableParams {
    pub fn new(gamma: f64) -> Result<Self> {
        Self::with_drift(gamma, 0.0)
    }

    pub fn with_drift(gamma: f64, omega_sq: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 2.0) {
            return Err(Error::Domain(format!("gamma must lie in (0,2), got {gamma}")));
        }
        if !(omega_sq >= 0.0) || !omega_sq.is_finite() {
            return Err(Error::Domain(format!("omega^2 must be >= 0, got {omega_sq}")));
        }
        Ok(Self { gamma, omega_sq })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Hurst index of the dual fBM, `γ/2`.
    #[inline]
    pub fn hurst(&self) -> f64 {
        self.gamma / 2.0
    }

    #[inline]
    pub fn omega_sq(&self) -> f64 {
        self.omega_sq
    }

    /// True at the Cauchy point, where several kernels vanish structurally.
    #[inline]
    pub fn is_cauchy(&self) -> bool {
        self.gamma == 1.0
    }
}

/// `|x|^p`, with `0^p = 0`.
#[inline]
pub fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        0.0
    } else {
        (p * a.ln()).exp()
    }
}

/// Carré du champ kernel `Ψ_γ(ξ,η)`.
pub fn psi(p: &StableParams, xi: f64, eta: f64) -> f64 {
    if p.is_cauchy() {
        return 0.5 * (xi.abs() + eta.abs() - (xi - eta).abs());
    }
    let g = p.gamma;
    0.5 * (abs_pow(xi, g) + abs_pow(eta, g) - abs_pow(xi - eta, g))
}

/// Squared kernel, the Fourier symbol of the iterated carré du champ.
#[inline]
pub fn psi_sq(p: &StableParams, xi: f64, eta: f64) -> f64 {
    let v = psi(p, xi, eta);
    v * v
}

fn check_hurst(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Hurst index must lie in (0,1), got {h}")))
    }
}

/// fBM covariance `R_H(s,t) = ½(s^{2H} + t^{2H} − |s−t|^{2H})`.
pub fn fbm_covariance(h: f64, s: f64, t: f64) -> Result<f64> {
    check_hurst(h)?;
    if s < 0.0 || t < 0.0 {
        return Err(Error::Domain(format!("fBM times must be >= 0, got ({s}, {t})")));
    }
    if h == 0.5 {
        return Ok(s.min(t));
    }
    let e = 2.0 * h;
    Ok(0.5 * (abs_pow(s, e) + abs_pow(t, e) - abs_pow(s - t, e)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSign {
    pub value: f64,
    pub class: SignClass,
}

/// Cross-sign kernel `Ψ_γ(n,−m) = ½(n^γ + m^γ − (n+m)^γ)` for `n, m ≥ 1`.
///
/// Zero at the Cauchy point is structural (computed in integers). Elsewhere a
/// value is classed as zero only if it is below `1e-14·(n^γ + m^γ)`.
pub fn cross_sign(p: &StableParams, n: u64, m: u64) -> CrossSign {
    assert!(n >= 1 && m >= 1, "cross_sign needs positive frequencies");
    if p.is_cauchy() {
        // n + m - (n + m) in integer arithmetic.
        let v = n as i128 + m as i128 - i128::from(n + m);
        return CrossSign { value: v as f64 * 0.5, class: SignClass::Zero };
    }
    let g = p.gamma;
    let (nf, mf) = (n as f64, m as f64);
    let scale = abs_pow(nf, g) + abs_pow(mf, g);
    let value = 0.5 * (scale - abs_pow(nf + mf, g));
    let class = if value.abs() < 1e-14 * scale {
        SignClass::Zero
    } else if value > 0.0 {
        SignClass::Positive
    } else {
        SignClass::Negative
    };
    CrossSign { value, class }
}

/// Single-mode coupling `α(γ) = 1 − 2^{γ−1}`.
pub fn alpha_coeff(gamma: f64) -> f64 {
    if gamma == 1.0 {
        return 0.0;
    }
    1.0 - (gamma - 1.0).exp2()
}

/// Drift coupling `β(γ) = (2^{γ+1} − 3^γ − 1)/2`.
pub fn beta_coeff(gamma: f64) -> f64 {
    if gamma == 1.0 {
        return 0.0;
    }
    0.5 * ((gamma + 1.0).exp2() - abs_pow(3.0, gamma) - 1.0)
}

/// Normalised fBM increment correlation `R_H(|ξ|,|η|) / (|ξ|^H |η|^H)`.
pub fn increment_correlation(p: &StableParams, xi: f64, eta: f64) -> Result<f64> {
    if xi == 0.0 || eta == 0.0 {
        return Err(Error::Domain("increment correlation undefined at zero frequency".into()));
    }
    let h = p.hurst();
    let r = fbm_covariance(h, xi.abs(), eta.abs())?;
    Ok(r / (abs_pow(xi, h) * abs_pow(eta, h)))
}
