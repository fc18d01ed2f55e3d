//! Brute-force Γ-calculus on trigonometric polynomials.
//!
//! Everything here is assembled from kernel sums over pairs of frequencies,
//! without going through any matrix. It is the independent check on the
//! matrix route in [`crate::curvature`].
//!
//! For complex `f` the iterated carré du champ is taken in its Hermitian form
//! `½[LΓ(f,f) − Γ(f,Lf) − Γ(Lf,f)]`, and likewise for the drift correction.
//! For real `f` both forms coincide with `½[LΓ(f,f) − 2Γ(f,Lf)]`.

mod trigpoly;

pub use trigpoly::{TrigPoly, PRUNE_REL};

use num_complex::Complex64;

use crate::kernels::{abs_pow, alpha_coeff, beta_coeff, psi, StableParams};

/// Default size of the uniform evaluation grid.
pub const DEFAULT_GRID: usize = 64;

/// `L_γ`: coefficient `n` times `−|n|^γ`.
pub fn apply_generator(p: &StableParams, f: &TrigPoly) -> TrigPoly {
    let g = p.gamma();
    f.map_diag(|n| {
        let s = if p.is_cauchy() { n.unsigned_abs() as f64 } else { abs_pow(n as f64, g) };
        Complex64::new(-s, 0.0)
    })
}

/// `Γ(f,g) = Σ a_n conj(b_m) Ψ_γ(n,m) e^{i(n−m)x}`.
pub fn carre_du_champ(p: &StableParams, f: &TrigPoly, g: &TrigPoly) -> TrigPoly {
    TrigPoly::from_terms(f.iter().flat_map(|(n, a)| {
        g.iter()
            .map(move |(m, b)| (n - m, a * b.conj() * psi(p, n as f64, m as f64)))
    }))
}

/// `Γ₂(f,f)` assembled from its definition through `L` and `Γ`.
pub fn gamma2_definition(p: &StableParams, f: &TrigPoly) -> TrigPoly {
    let lf = apply_generator(p, f);
    let l_gamma = apply_generator(p, &carre_du_champ(p, f, f));
    l_gamma
        .sub(&carre_du_champ(p, f, &lf))
        .sub(&carre_du_champ(p, &lf, f))
        .scale_re(0.5)
}

/// `Γ₂(f,f)` through the squared kernel `Σ a_n conj(a_m) Ψ_γ(n,m)² e^{i(n−m)x}`.
pub fn gamma2_hadamard(p: &StableParams, f: &TrigPoly) -> TrigPoly {
    TrigPoly::from_terms(f.iter().flat_map(|(n, a)| {
        f.iter().map(move |(m, b)| {
            let k = psi(p, n as f64, m as f64);
            (n - m, a * b.conj() * (k * k))
        })
    }))
}

/// The drift field `b(x) = −ω² sin x` as a polynomial.
pub fn drift_field(omega_sq: f64) -> TrigPoly {
    TrigPoly::sin(1).scale_re(-omega_sq)
}

/// `b·∇f` with `b(x) = −ω² sin x`.
pub fn drift_apply(omega_sq: f64, f: &TrigPoly) -> TrigPoly {
    assert!(omega_sq >= 0.0, "omega^2 must be non-negative");
    drift_field(omega_sq).mul(&f.derivative())
}

/// `½[b·∇Γ(f,f) − Γ(f, b·∇f) − Γ(b·∇f, f)]`.
pub fn drift_correction(p: &StableParams, f: &TrigPoly) -> TrigPoly {
    let w = p.omega_sq();
    let bf = drift_apply(w, f);
    drift_apply(w, &carre_du_champ(p, f, f))
        .sub(&carre_du_champ(p, f, &bf))
        .sub(&carre_du_champ(p, &bf, f))
        .scale_re(0.5)
}

/// Iterated carré du champ of `L_γ + b·∇`, with `ω²` taken from `p`.
pub fn drift_gamma2(p: &StableParams, f: &TrigPoly) -> TrigPoly {
    gamma2_definition(p, f).add(&drift_correction(p, f))
}

/// Phase-stripped drift correction on `e^{ix}, …, e^{iNx}` at `γ = 1`.
///
/// Entry `(n,m)` of the raw matrix is `½b·∇Γ(e_n,e_m) − Γ(e_n, b·∇e_m)` with
/// the common factor `e^{i(n−m)x}` removed, which leaves
/// `plus·e^{ix} + minus·e^{−ix}`. The two coefficient matrices are computed once
/// and the matrix can then be evaluated at any `x`.
#[derive(Debug, Clone)]
pub struct DriftCorrection {
    n: usize,
    omega_sq: f64,
    plus: Vec<Complex64>,
    minus: Vec<Complex64>,
}

impl DriftCorrection {
    pub fn new(omega_sq: f64, n: usize) -> Self {
        assert!(n >= 1, "need at least one mode");
        let p = StableParams::with_drift(1.0, omega_sq).expect("gamma = 1 is valid");
        let basis: Vec<TrigPoly> = (1..=n as i64)
            .map(|k| TrigPoly::monomial(k, Complex64::new(1.0, 0.0)))
            .collect();
        let drifted: Vec<TrigPoly> = basis.iter().map(|e| drift_apply(omega_sq, e)).collect();
        let mut plus = vec![Complex64::default(); n * n];
        let mut minus = vec![Complex64::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                let raw = drift_apply(omega_sq, &carre_du_champ(&p, &basis[i], &basis[j]))
                    .scale_re(0.5)
                    .sub(&carre_du_champ(&p, &basis[i], &drifted[j]));
                let shift = i as i64 - j as i64;
                debug_assert!(raw.iter().all(|(k, _)| (k - shift).abs() == 1));
                plus[i * n + j] = raw.coeff(shift + 1);
                minus[i * n + j] = raw.coeff(shift - 1);
            }
        }
        Self { n, omega_sq, plus, minus }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Raw (non-Hermitian) phase-stripped matrix at `x`, row-major.
    pub fn raw_at(&self, x: f64) -> Vec<Complex64> {
        let ep = Complex64::from_polar(1.0, x);
        let em = ep.conj();
        self.plus
            .iter()
            .zip(&self.minus)
            .map(|(&a, &b)| a * ep + b * em)
            .collect()
    }

    /// Hermitian part `½(D + D*)` at `x`, row-major.
    pub fn hermitian_at(&self, x: f64) -> Vec<Complex64> {
        let n = self.n;
        let raw = self.raw_at(x);
        let mut out = vec![Complex64::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = 0.5 * (raw[i * n + j] + raw[j * n + i].conj());
            }
        }
        out
    }

    /// Largest entrywise distance of the Hermitian part from
    /// `(ω²/2) cos x · min(n,m)`.
    pub fn deviation_at(&self, x: f64) -> f64 {
        let n = self.n;
        let h = self.hermitian_at(x);
        let c = 0.5 * self.omega_sq * x.cos();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let want = c * (i.min(j) + 1) as f64;
                worst = worst.max((h[i * n + j] - want).norm());
            }
        }
        worst
    }
}

/// Hermitian drift correction matrix at one point, with its distance from
/// `(ω²/2) cos x · min(n,m)`.
#[derive(Debug, Clone)]
pub struct D0Extraction {
    pub n: usize,
    /// Row-major `n × n` Hermitian matrix.
    pub matrix: Vec<Complex64>,
    pub max_deviation: f64,
}

pub fn extract_d0(omega_sq: f64, n: usize, x: f64) -> D0Extraction {
    let dc = DriftCorrection::new(omega_sq, n);
    D0Extraction { n, matrix: dc.hermitian_at(x), max_deviation: dc.deviation_at(x) }
}

/// `Γ₂/Γ` for `f = cos(nx)`: `n^γ (1 + α² cos 2nx)/(1 + α cos 2nx)`.
pub fn single_mode_ratio(gamma: f64, n: u64, x: f64) -> f64 {
    assert!(n >= 1, "mode index must be positive");
    let a = alpha_coeff(gamma);
    let c = (2.0 * n as f64 * x).cos();
    let scale = if gamma == 1.0 { n as f64 } else { abs_pow(n as f64, gamma) };
    scale * (1.0 + a * a * c) / (1.0 + a * c)
}

/// `Γ_{L,2}/Γ` for `f = cos x` under the drift `−ω² sin x`.
pub fn drift_single_mode_ratio(gamma: f64, omega_sq: f64, x: f64) -> f64 {
    let a = alpha_coeff(gamma);
    let b = beta_coeff(gamma);
    let c2 = (2.0 * x).cos();
    let num = 1.0 + a * a * c2 + 0.5 * omega_sq * (x.cos() + b * (3.0 * x).cos());
    num / (1.0 + a * c2)
}

/// Pointwise ratio of two fields; both are expected to be real-valued.
pub fn pointwise_ratio(num: &TrigPoly, den: &TrigPoly, x: f64) -> f64 {
    num.eval(x).re / den.eval(x).re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(g: f64) -> StableParams {
        StableParams::new(g).unwrap()
    }

    fn e(n: i64) -> TrigPoly {
        TrigPoly::monomial(n, Complex64::new(1.0, 0.0))
    }

    #[test]
    fn generator() {
        let l = apply_generator(&sp(1.0), &e(3));
        assert_eq!(l, e(3).scale_re(-3.0));
        assert!(apply_generator(&sp(0.7), &TrigPoly::constant(2.0)).is_empty());
        let l = apply_generator(&sp(0.5), &TrigPoly::cos(1));
        assert!(l.max_abs_diff(&TrigPoly::cos(1).scale_re(-1.0)) < 1e-15);
    }

    #[test]
    fn carre_du_champ_examples() {
        for g in [0.3, 1.0, 1.8] {
            let p = sp(g);
            assert!(carre_du_champ(&p, &e(1), &e(1)).max_abs_diff(&TrigPoly::constant(1.0)) < 1e-15);
            for n in [1i64, 2, 5] {
                let f = TrigPoly::cos(n);
                let got = carre_du_champ(&p, &f, &f);
                let a = alpha_coeff(g);
                let want = TrigPoly::constant(1.0)
                    .add(&TrigPoly::cos(2 * n).scale_re(a))
                    .scale_re(0.5 * (n as f64).powf(g));
                assert!(got.max_abs_diff(&want) < 1e-13, "g={g} n={n}");
            }
        }
        let cross = carre_du_champ(&sp(1.0), &e(1), &e(-1));
        assert!(cross.is_empty());
    }

    #[test]
    fn gamma2_examples() {
        for g in [0.4, 1.0, 1.6] {
            let p = sp(g);
            let g2 = gamma2_definition(&p, &e(1));
            assert!(g2.max_abs_diff(&TrigPoly::constant(1.0)) < 1e-14);
            assert!(gamma2_definition(&p, &TrigPoly::constant(3.0)).is_empty());
        }
        let f = e(1).add(&e(2));
        let p = sp(1.0);
        assert_eq!(gamma2_definition(&p, &f), gamma2_hadamard(&p, &f));

        let h = gamma2_hadamard(&p, &TrigPoly::cos(1));
        assert_eq!(h, TrigPoly::constant(0.5));
    }

    #[test]
    fn drift_examples() {
        let d = drift_apply(2.0, &e(1));
        let want = TrigPoly::from_terms([(0, Complex64::new(1.0, 0.0)), (2, Complex64::new(-1.0, 0.0))]);
        assert!(d.max_abs_diff(&want) < 1e-15);
        assert!(drift_apply(1.3, &TrigPoly::constant(1.0)).is_empty());
        let f = TrigPoly::real_from_cos_sin(&[1.0, -0.3], &[0.2, 0.7]);
        assert!(drift_apply(0.8, &f).is_real());
    }

    #[test]
    fn drift_gamma2_examples() {
        let f = TrigPoly::real_from_cos_sin(&[0.4, 1.0], &[-0.5, 0.1]);
        let p0 = StableParams::with_drift(0.7, 0.0).unwrap();
        assert_eq!(drift_gamma2(&p0, &f), gamma2_definition(&p0, &f));

        let p = StableParams::with_drift(1.0, 1.0).unwrap();
        let cosx = TrigPoly::cos(1);
        let num = drift_gamma2(&p, &cosx);
        let den = carre_du_champ(&p, &cosx, &cosx);
        for x in TrigPoly::grid(32) {
            let r = pointwise_ratio(&num, &den, x);
            assert!((r - (1.0 + 0.5 * x.cos())).abs() < 1e-12);
        }

        let p = StableParams::with_drift(1.3, 0.5).unwrap();
        let num = drift_gamma2(&p, &cosx);
        let den = carre_du_champ(&p, &cosx, &cosx);
        let r = pointwise_ratio(&num, &den, 1.0);
        assert!((r - drift_single_mode_ratio(1.3, 0.5, 1.0)).abs() < 1e-10);
    }

    #[test]
    fn d0_examples() {
        let d = extract_d0(0.8, 6, 0.37);
        assert!(d.max_deviation <= 1e-12);
        for k in 0..6 {
            let want = 0.4 * (k + 1) as f64 * 0.37f64.cos();
            assert!((d.matrix[k * 6 + k] - want).norm() < 1e-13);
        }
        let z = extract_d0(0.0, 4, 1.0);
        assert!(z.matrix.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn single_mode_examples() {
        for n in [1u64, 3, 7] {
            for x in [0.0, 0.4, 2.0] {
                assert_eq!(single_mode_ratio(1.0, n, x), n as f64);
            }
        }
        let a = 1.0 - 0.5f64.sqrt();
        assert!((single_mode_ratio(0.5, 1, 0.0) - (1.0 + a * a) / (1.0 + a)).abs() < 1e-15);
        for x in [0.0, 1.0, 2.5] {
            assert!((drift_single_mode_ratio(0.6, 0.0, x) - single_mode_ratio(0.6, 1, x)).abs() < 1e-15);
        }
        assert!((drift_single_mode_ratio(1.0, 1.4, std::f64::consts::PI) - 0.3).abs() < 1e-15);
    }
}
