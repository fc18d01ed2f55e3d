//! The reproduction document behind `stablecurv report`: every reference
//! number recomputed and compared with its tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use stablecurv::curvature::{
    contraction_profile, decay_exponent_fit, global_drift_kappa, kappa, landscape, min_entry_bound, perron_check,
    quadratic_fit_c, real_curvature, single_mode_kappa, zmatrix_point, zmatrix_scan, RealCurvatureOptions, Side,
    DEFAULT_EPS_GRID, DRIFT_GRID,
};
use stablecurv::eigensolve::gen_eigen_spd;
use stablecurv::kernels::{alpha_coeff, beta_coeff, cross_sign, fbm_covariance, increment_correlation, psi};
use stablecurv::matrices::{build_m_exact, build_r, hadamard_power, inverse_times, log_det};
use stablecurv::oracle::{
    apply_generator, carre_du_champ, drift_correction, drift_gamma2, extract_d0, gamma2_definition, gamma2_hadamard,
    single_mode_ratio, TrigPoly,
};
use stablecurv::{Result, StableParams};

use crate::output::{open, Format, RowSink};
use crate::{Cli, CliError, Progress};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `|computed − expected| ≤ tolerance`.
    Within,
    /// `computed ≥ expected − tolerance`.
    AtLeast,
    /// `computed ≤ expected + tolerance`.
    AtMost,
    /// `computed > expected`.
    Above,
    /// `computed < expected`.
    Below,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub claim: String,
    pub paper_location: &'static str,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub relation: Relation,
}

#[derive(Default)]
struct Doc {
    entries: Vec<Entry>,
}

impl Doc {
    fn push(&mut self, claim: impl Into<String>, at: &'static str, rel: Relation, expected: f64, computed: f64, tol: f64) {
        let pass = match rel {
            Relation::Within => (computed - expected).abs() <= tol,
            Relation::AtLeast => computed >= expected - tol,
            Relation::AtMost => computed <= expected + tol,
            Relation::Above => computed > expected,
            Relation::Below => computed < expected,
        };
        self.entries.push(Entry {
            claim: claim.into(),
            paper_location: at,
            expected,
            computed,
            tolerance: tol,
            pass,
            relation: rel,
        });
    }

    fn within(&mut self, claim: impl Into<String>, at: &'static str, expected: f64, computed: f64, tol: f64) {
        self.push(claim, at, Relation::Within, expected, computed, tol);
    }

    fn flag(&mut self, claim: impl Into<String>, at: &'static str, holds: bool) {
        self.within(claim, at, 1.0, if holds { 1.0 } else { 0.0 }, 0.0);
    }
}

const ODD: &str = "odd-integer spectrum theorem";
const PLATEAU: &str = "numerical curvature landscape";
const LOWER: &str = "lower bound lemma for H <= 1/2";
const DRIFT: &str = "drift-perturbed Cauchy curvature";
const CROSS: &str = "cross-sign vanishing theorem";
const SINGLE: &str = "single-mode curvature proposition";
const HADAMARD: &str = "Hadamard-square theorem";
const REAL: &str = "real-polynomial curvature corollary";
const VOLUME: &str = "volume contraction corollary";

fn max_diff(a: &TrigPoly, b: &TrigPoly) -> f64 {
    a.max_abs_diff(b)
}

fn kernels(d: &mut Doc) -> Result<()> {
    let p1 = StableParams::new(1.0)?;
    d.within("Psi_1(3,5) = min(3,5)", "Brownian covariance proposition", 3.0, psi(&p1, 3.0, 5.0), 0.0);
    d.within("R_1/2(2,7) = min(2,7)", "fractional Brownian motion background", 2.0, fbm_covariance(0.5, 2.0, 7.0)?, 0.0);
    let worst = (1..=50u64)
        .flat_map(|n| (1..=50u64).map(move |m| (n, m)))
        .map(|(n, m)| cross_sign(&p1, n, m).value.abs())
        .fold(0.0, f64::max);
    d.within("cross-sign kernel at gamma = 1 (n, m <= 50)", CROSS, 0.0, worst, 0.0);
    d.within("alpha(1)", SINGLE, 0.0, alpha_coeff(1.0), 0.0);
    d.within("beta(1)", DRIFT, 0.0, beta_coeff(1.0), 0.0);
    let rho = |g: f64| increment_correlation(&StableParams::new(g)?, 1.0, 2.0);
    d.push(
        "increment correlation increasing in gamma (1.5 vs 0.5)",
        "increment correlation discussion",
        Relation::AtLeast,
        0.0,
        rho(1.5)? - rho(0.5)?,
        0.0,
    );
    Ok(())
}

fn matrices(d: &mut Doc) -> Result<()> {
    let r = build_r(0.5, 3)?;
    let want = [[1.0, 1.0, 1.0], [1.0, 2.0, 2.0], [1.0, 2.0, 3.0]];
    let worst = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| (r.get(i, j) - want[i][j]).abs()).fold(0.0, f64::max);
    d.within("R_1/2 at N = 3 is min(n,m)", ODD, 0.0, worst, 0.0);
    let ld = (1..=200).map(|n| build_r(0.5, n).and_then(|r| log_det(&r))).collect::<Result<Vec<_>>>()?;
    d.within("max |log det R_1/2| for N <= 200", VOLUME, 0.0, ld.iter().fold(0.0, |a, b| a.max(b.abs())), 1e-10);
    let m3 = build_m_exact(3)?;
    let want = [[1, -2, -2], [0, 3, -2], [0, 0, 5]];
    let ok = (0..3).all(|i| (0..3).all(|j| m3.get(i, j) == want[i][j]));
    d.flag("exact curvature matrix at N = 3", ODD, ok);
    d.within("diagonal of the exact matrix at N = 4 ends in 7", ODD, 7.0, build_m_exact(4)?.diagonal()[3] as f64, 0.0);
    let mut worst: f64 = 0.0;
    for n in 1..=100 {
        let exact = build_m_exact(n)?;
        let r = build_r(0.5, n)?;
        let float = inverse_times(&r, &hadamard_power(&r, 2))?;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((exact.get(i, j) as f64 - float.get(i, j)).abs());
            }
        }
    }
    d.within("float R^-1 R^(o2) vs exact matrix, N <= 100", ODD, 0.0, worst, 1e-10);
    let r = build_r(0.3, 10)?;
    let z = inverse_times(&r, &hadamard_power(&r, 2))?;
    d.push("off-diagonal of R^-1 R^(o2) at H = 0.3, N = 10", LOWER, Relation::AtMost, 0.0, z.max_offdiag(), 1e-10);
    let det3 = build_r(0.5, 3).and_then(|r| log_det(&r))?.exp();
    d.within("det R_1/2 at N = 3", VOLUME, 1.0, det3, 1e-10);
    Ok(())
}

fn spectra(d: &mut Doc) -> Result<()> {
    let mut worst: f64 = 0.0;
    for n in 1..=50 {
        let r = build_r(0.5, n)?;
        let s = gen_eigen_spd(&hadamard_power(&r, 2), &r, false)?;
        for (k, l) in s.values.iter().enumerate() {
            let want = (2 * k + 1) as f64;
            worst = worst.max((l - want).abs() / want);
        }
    }
    d.within("odd spectrum N=50", ODD, 0.0, worst, 1e-9);
    d.push("2x2 subproblem at H = 0.75", "upper bound lemma", Relation::Below, 1.0, kappa(1.5, 2)?.kappa, 0.0);
    let real = real_curvature(1.0, 10, &RealCurvatureOptions::default())?;
    d.within("mixed-sign pencil at gamma = 1, N = 10", REAL, 1.0, real.pencil_kappa, 1e-9);
    d.within("retained dimension of the mixed-sign pencil, N = 10", REAL, 20.0, real.retained_dim as f64, 0.0);
    d.within("kappa_real(1, 10)", REAL, 1.0, real.constrained_kappa, 1e-6);
    Ok(())
}

fn curvature(d: &mut Doc, progress: Progress) -> Result<()> {
    d.within("kappa(1, 25)", ODD, 1.0, kappa(1.0, 25)?.kappa, 1e-9);
    d.within("kappa(1.5) limit", PLATEAU, 0.899, kappa(1.5, 300)?.kappa, 0.005);
    d.within("kappa(1.8) limit", PLATEAU, 0.594, kappa(1.8, 300)?.kappa, 0.005);
    progress.note("report: plateau values done");
    for g in [0.5, 1.5] {
        let fit = decay_exponent_fit(g, 30, 300)?;
        d.push(format!("decrement decay exponent at gamma = {g}"), PLATEAU, Relation::Above, 2.0, fit.exponent, 0.0);
    }
    progress.note("report: decay fits done");
    let c = quadratic_fit_c(&DEFAULT_EPS_GRID, 200, Side::Right)?;
    d.within("quadratic coefficient c", PLATEAU, 0.267, c.c, 0.03);
    d.within("kappa_1(1)", SINGLE, 1.0, single_mode_kappa(1.0)?, 0.0);
    Ok(())
}

fn structure(d: &mut Doc, progress: Progress) -> Result<()> {
    let z = zmatrix_point(0.5, 50)?;
    d.within("strictly upper entries of the curvature matrix at H = 1/2", ODD, -2.0, z.max_upper, 1e-9);
    let failing = zmatrix_scan(&[0.3], 200)?.iter().filter(|r| !r.pass).count();
    d.within("Z-matrix failures at H = 0.3 for N <= 200", LOWER, 0.0, failing as f64, 0.0);
    let z7 = zmatrix_point(0.7, 10)?;
    d.push("positive off-diagonal entry at H = 0.7, N = 10", PLATEAU, Relation::Above, 1e-10, z7.max_offdiag, 0.0);
    d.within("sign changes of the minimizer at H = 0.4, N = 50", LOWER, 0.0, perron_check(0.4, 50)?.sign_changes as f64, 0.0);
    d.flag("non-negative minimizer at H = 0.5, N = 50", LOWER, perron_check(0.5, 50)?.nonnegative);
    d.push(
        "sign changes of the minimizer at H = 0.9, N = 50",
        PLATEAU,
        Relation::AtLeast,
        1.0,
        perron_check(0.9, 50)?.sign_changes as f64,
        0.0,
    );
    d.push("minimum entry bound at H = 0.25, N = 100", LOWER, Relation::AtLeast, 0.5, min_entry_bound(0.25, 100)?, 0.0);
    progress.note("report: structure checks done");

    let gammas: Vec<f64> = (1..=19).map(|k| (k as f64 / 10.0 * 1e12).round() / 1e12).collect();
    let rows = landscape(&gammas, 200)?;
    let best = rows.iter().max_by(|a, b| a.kappa.total_cmp(&b.kappa)).expect("non-empty grid");
    d.within("argmax of kappa over gamma in 0.1:1.9:0.1, N = 200", PLATEAU, 1.0, best.gamma, 0.0);
    d.within("max of kappa over the landscape grid", PLATEAU, 1.0, best.kappa, 1e-9);
    let off = rows.iter().filter(|r| (r.gamma - 1.0).abs() >= 0.05).map(|r| r.kappa).fold(f64::NEG_INFINITY, f64::max);
    d.push("kappa away from gamma = 1 stays below 1", "upper bound lemma", Relation::AtMost, 1.0 - 1e-6, off, 0.0);
    let low = rows.iter().filter(|r| r.gamma <= 1.0).map(|r| r.kappa).fold(f64::INFINITY, f64::min);
    d.push("kappa for gamma <= 1, N = 200", LOWER, Relation::AtLeast, 0.5, low, 1e-9);
    progress.note("report: landscape done");
    Ok(())
}

fn oracle(d: &mut Doc) -> Result<()> {
    let p1 = StableParams::new(1.0)?;
    let f = TrigPoly::monomial(3, Complex64::new(1.0, 0.0));
    d.within("L_1 e^{3ix} coefficient", "diagonal action of the generator", -3.0, apply_generator(&p1, &f).coeff(3).re, 0.0);

    let mut worst: f64 = 0.0;
    for g in [0.3, 1.0, 1.7] {
        let p = StableParams::new(g)?;
        for n in 1..=4i64 {
            let f = TrigPoly::cos(n);
            let got = carre_du_champ(&p, &f, &f);
            let s = psi(&p, n as f64, n as f64);
            let want = TrigPoly::constant(s / 2.0)
                .add(&TrigPoly::cos(2 * n).scale_re(s / 2.0 * alpha_coeff(g)));
            worst = worst.max(max_diff(&got, &want));
        }
    }
    d.within("Gamma(cos nx, cos nx) closed form", SINGLE, 0.0, worst, 1e-12);

    let e1 = TrigPoly::monomial(1, Complex64::new(1.0, 0.0));
    let em1 = TrigPoly::monomial(-1, Complex64::new(1.0, 0.0));
    d.within("Gamma(e^{ix}, e^{-ix}) at frequency 2, gamma = 1", CROSS, 0.0, carre_du_champ(&p1, &e1, &em1).coeff(2).norm(), 0.0);

    let f = e1.add(&TrigPoly::monomial(2, Complex64::new(1.0, 0.0)));
    d.within("Gamma_2 via definition vs squared kernel, e^{ix} + e^{2ix}", HADAMARD, 0.0, max_diff(&gamma2_definition(&p1, &f), &gamma2_hadamard(&p1, &f)), 0.0);

    let mut worst: f64 = 0.0;
    for n in 1..=12i64 {
        for w in [0.5, 1.0, 1.9] {
            let p = StableParams::with_drift(1.0, w)?;
            let f = TrigPoly::from_terms((1..=n).map(|k| (k, Complex64::new(1.0 / k as f64, 0.3 * k as f64))));
            let want = TrigPoly::cos(1).scale_re(w / 2.0).mul(&carre_du_champ(&p, &f, &f));
            worst = worst.max(max_diff(&drift_correction(&p, &f), &want));
        }
    }
    d.within("drift correction equals (w^2/2) cos x Gamma at gamma = 1", DRIFT, 0.0, worst, 1e-10);

    let p = StableParams::with_drift(1.0, 1.0)?;
    let f = TrigPoly::cos(1);
    let (num, den) = (drift_gamma2(&p, &f), carre_du_champ(&p, &f, &f));
    let worst = TrigPoly::grid(100)
        .into_iter()
        .map(|x| (num.eval(x).re / den.eval(x).re - (1.0 + 0.5 * x.cos())).abs())
        .fold(0.0, f64::max);
    d.within("drift ratio for cos x is 1 + cos(x)/2 at w^2 = 1", DRIFT, 0.0, worst, 1e-10);

    let worst = [(0.3, 0.4), (1.0, PI), (1.9, 2.5)]
        .iter()
        .map(|&(w, x)| extract_d0(w, 6, x).max_deviation)
        .fold(0.0, f64::max);
    d.within("Hermitian drift matrix is (w^2/2) cos x min(n,m), N = 6", DRIFT, 0.0, worst, 1e-12);
    let dg = extract_d0(1.0, 6, 0.0).matrix[2 * 6 + 2].re;
    d.within("drift matrix diagonal entry (3,3) at w^2 = 1, x = 0", DRIFT, 1.5, dg, 1e-12);

    let worst = (1..=5u64).map(|n| (single_mode_ratio(1.0, n, 0.7) - n as f64).abs()).fold(0.0, f64::max);
    d.within("single-mode ratio at gamma = 1 equals n", SINGLE, 0.0, worst, 1e-12);
    Ok(())
}

fn drift_and_volume(d: &mut Doc) -> Result<()> {
    for w in [0.0, 1.0, 1.5] {
        let g = global_drift_kappa(w, 20, DRIFT_GRID)?;
        d.within(format!("global drift curvature at w^2 = {w}, N = 20"), DRIFT, 1.0 - w / 2.0, g.kappa, 1e-6);
        if w > 0.0 {
            d.within(format!("minimizing angle at w^2 = {w}"), DRIFT, PI, g.argmin_x, 1e-12);
        }
    }
    let p3 = contraction_profile(3)?;
    d.within("log volume ratio at N = 3 is (1/2) ln 15", VOLUME, 0.5 * 15f64.ln(), p3.volume_ratio_log, 1e-14);
    d.within("det of the exact curvature matrix at N = 3", VOLUME, 15.0, build_m_exact(3)?.det().unwrap_or(0) as f64, 0.0);
    let s = contraction_profile(1000)?.stirling_ratio;
    d.within("geometric mean of rates over 2N/e at N = 1000", VOLUME, 1.0, s, 1e-3);
    Ok(())
}

pub fn build(progress: Progress) -> Result<Vec<Entry>> {
    let mut d = Doc::default();
    kernels(&mut d)?;
    matrices(&mut d)?;
    spectra(&mut d)?;
    oracle(&mut d)?;
    drift_and_volume(&mut d)?;
    curvature(&mut d, progress)?;
    structure(&mut d, progress)?;
    Ok(d.entries)
}

/// Writes the document (always JSON) and returns the number of failed entries.
pub fn run(cli: &Cli, progress: Progress) -> std::result::Result<usize, CliError> {
    let entries = build(progress)?;
    let mut sink = RowSink::new(Format::Json, open(cli.output.as_deref())?);
    for e in &entries {
        sink.row(e)?;
    }
    sink.finish()?;
    let failed = entries.iter().filter(|e| !e.pass).count();
    progress.note(format!("report: {} entries, {failed} failed", entries.len()));
    Ok(failed)
}
