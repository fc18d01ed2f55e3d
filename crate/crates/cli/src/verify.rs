//! The invariant suite behind `stablecurv verify`.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use stablecurv::curvature::{
    contraction_profile, decay_exponent_fit, global_drift_kappa, kappa, kappa_sequence, perron_check,
    quadratic_fit_c, real_curvature, zmatrix_point, zmatrix_scan, RealCurvatureOptions, Side, DEFAULT_EPS_GRID,
    DRIFT_GRID,
};
use stablecurv::eigensolve::{gen_eigen_spd, sym_eigen, sym_eigen_jacobi};
use stablecurv::kernels::{cross_sign, fbm_covariance, psi, SignClass};
use stablecurv::matrices::{build_m_exact, build_r, cholesky, hadamard_power, inverse_times, log_det, SymMatrix};
use stablecurv::oracle::{
    carre_du_champ, drift_correction, drift_gamma2, drift_single_mode_ratio, extract_d0, gamma2_definition,
    gamma2_hadamard, single_mode_ratio, TrigPoly,
};
use stablecurv::rng::stream;
use stablecurv::StableParams;

use crate::output::{open, RowSink};
use crate::{Cli, CliError, Progress};

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub gamma: Option<f64>,
    pub h: Option<f64>,
    pub n: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Failure that theory predicts, e.g. the Z-matrix test above `H = 1/2`.
    ExpectedFail,
    /// A predicted failure that did not happen.
    UnexpectedPass,
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::ExpectedFail => "expected-fail",
            Status::UnexpectedPass => "UNEXPECTED-PASS",
            Status::Error => "ERROR",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::UnexpectedPass | Status::Error)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: &'static str,
    pub status: Status,
    /// Timing goes to standard error only, so tables stay reproducible.
    #[serde(skip)]
    pub seconds: f64,
    pub detail: String,
}

type Outcome = Result<(Status, String), String>;

fn verdict(ok: bool, detail: String) -> Outcome {
    Ok((if ok { Status::Pass } else { Status::Fail }, detail))
}

fn e(err: stablecurv::Error) -> String {
    err.to_string()
}

pub struct Check {
    pub name: &'static str,
    pub about: &'static str,
    run: fn(&VerifyOptions) -> Outcome,
}

pub const CHECKS: &[Check] = &[
    Check { name: "psi-kernel", about: "kernel symmetry, diagonal and fBM correspondence", run: psi_kernel },
    Check { name: "cross-sign", about: "cross-sign kernel sign by gamma (n, m <= 50)", run: cross_sign_check },
    Check { name: "cholesky", about: "Cholesky reconstruction of R_H", run: cholesky_check },
    Check { name: "hadamard-positivity", about: "Hadamard squares of R_H stay positive definite", run: hadamard_positivity },
    Check { name: "exact-matrix", about: "exact integer curvature matrix vs float product (N <= 100)", run: exact_matrix },
    Check { name: "unit-determinant", about: "log det R_1/2 = 0 (N <= 200)", run: unit_determinant },
    Check { name: "eigen-cross-check", about: "QL against Jacobi on random matrices (n <= 8)", run: eigen_cross_check },
    Check { name: "odd-spectrum", about: "gamma = 1 pencil spectrum is 1, 3, ..., 2N-1 (N <= 50)", run: odd_spectrum },
    Check { name: "kappa-cauchy", about: "kappa(1, N) = 1", run: kappa_cauchy },
    Check { name: "kappa-plateau", about: "kappa(1.5, 300) and kappa(1.8, 300)", run: kappa_plateau },
    Check { name: "lower-bound", about: "kappa >= 1/2 for gamma <= 1 (N <= 200)", run: lower_bound },
    Check { name: "z-matrix", about: "non-positive off-diagonal of R^-1 R^(o2) for H <= 1/2", run: z_matrix },
    Check { name: "perron", about: "sign structure of the minimizing vector", run: perron },
    Check { name: "monotone", about: "kappa(gamma, N) non-increasing in N", run: monotone },
    Check { name: "decay", about: "decrement decay exponent above 2", run: decay },
    Check { name: "quadratic", about: "quadratic coefficient at gamma = 1", run: quadratic },
    Check { name: "hadamard-square", about: "Gamma_2 equals the squared-kernel form (oracle)", run: hadamard_square },
    Check { name: "single-mode", about: "single-mode closed forms vs oracle", run: single_mode },
    Check { name: "oracle-positivity", about: "real inputs give real, non-negative Gamma_2", run: oracle_positivity },
    Check { name: "scalar-shift", about: "drift correction is (w^2/2) cos x Gamma at gamma = 1", run: scalar_shift },
    Check { name: "drift-matrix", about: "Hermitian drift matrix equals (w^2/2) cos x min(n,m)", run: drift_matrix },
    Check { name: "drift-kappa", about: "global drift curvature 1 - w^2/2", run: drift_kappa },
    Check { name: "real-curvature", about: "real-polynomial curvature at gamma = 1", run: real_curv },
    Check { name: "contraction", about: "double factorial volume and Stirling ratio", run: contraction },
];

pub fn list() -> Result<(), CliError> {
    for c in CHECKS {
        println!("{:<20} {}", c.name, c.about);
    }
    Ok(())
}

fn select(only: Option<&str>) -> Result<Vec<&'static Check>, CliError> {
    let Some(only) = only else {
        return Ok(CHECKS.iter().collect());
    };
    let mut picked = Vec::new();
    for name in only.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match CHECKS.iter().find(|c| c.name == name) {
            Some(c) => picked.push(c),
            None => return Err(CliError::Config(format!("unknown check {name:?}; see `verify --list`"))),
        }
    }
    if picked.is_empty() {
        return Err(CliError::Config("--only selected no checks".into()));
    }
    Ok(picked)
}

pub fn run_checks(only: Option<&str>, opts: &VerifyOptions, mut on_row: impl FnMut(&CheckRow)) -> Result<Vec<CheckRow>, CliError> {
    let checks = select(only)?;
    let mut rows = Vec::new();
    for c in checks {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(|| (c.run)(opts)).unwrap_or_else(|_| Err("panicked".into()));
        let (status, detail) = outcome.unwrap_or_else(|msg| (Status::Error, msg));
        let row = CheckRow { check: c.name, status, seconds: start.elapsed().as_secs_f64(), detail };
        on_row(&row);
        rows.push(row);
    }
    Ok(rows)
}

/// Runs the selected checks and returns the number that failed.
pub fn run(cli: &Cli, only: Option<&str>, opts: &VerifyOptions, progress: Progress) -> Result<usize, CliError> {
    if let Some(g) = opts.gamma {
        StableParams::new(g)?;
    }
    if let Some(h) = opts.h {
        if !(h > 0.0 && h < 1.0) {
            return Err(CliError::Config(format!("--h must lie in (0,1), got {h}")));
        }
    }
    if opts.n == Some(0) {
        return Err(CliError::Config("--n must be at least 1".into()));
    }
    let mut sink = RowSink::new(cli.format, open(cli.output.as_deref())?);
    let mut io_err = None;
    let rows = run_checks(only, opts, |row| {
        progress.note(format!("{:<16} {:<20} {:>8.2}s", row.status.label(), row.check, row.seconds));
        if let Err(err) = sink.row(row) {
            io_err.get_or_insert(err);
        }
    })?;
    if let Some(err) = io_err {
        return Err(err.into());
    }
    sink.finish()?;
    let failed = rows.iter().filter(|r| r.status.is_failure()).count();
    progress.note(format!("{} checks, {failed} failed", rows.len()));
    Ok(failed)
}

fn psi_kernel(o: &VerifyOptions) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..500u64 {
        let mut rng = stream(o.seed, i);
        let g = rng.gen_range(0.02..1.98);
        let p = StableParams::new(g).map_err(e)?;
        let (x, y) = (rng.gen_range(1..300) as f64, rng.gen_range(1..300) as f64);
        let scale = x.max(y).powf(g);
        worst = worst.max((psi(&p, x, y) - psi(&p, y, x)).abs() / scale);
        worst = worst.max((psi(&p, x, x) - x.powf(g)).abs() / scale);
        worst = worst.max((psi(&p, x, y) - fbm_covariance(g / 2.0, x, y).map_err(e)?).abs() / scale);
    }
    verdict(worst <= 1e-12, format!("500 random points, max relative deviation {worst:.2e}"))
}

fn cross_sign_check(o: &VerifyOptions) -> Outcome {
    let gammas = o.gamma.map(|g| vec![g]).unwrap_or_else(|| vec![0.5, 1.0, 1.5]);
    let mut bad = 0;
    let mut exact_zeros = 0;
    for &g in &gammas {
        let p = StableParams::new(g).map_err(e)?;
        let want = if g < 1.0 {
            SignClass::Positive
        } else if g > 1.0 {
            SignClass::Negative
        } else {
            SignClass::Zero
        };
        for n in 1..=50 {
            for m in 1..=50 {
                let c = cross_sign(&p, n, m);
                if c.class != want {
                    bad += 1;
                }
                if c.value == 0.0 {
                    exact_zeros += 1;
                }
            }
        }
    }
    verdict(bad == 0, format!("gamma {gammas:?}: {bad} misclassified, {exact_zeros} exact zeros"))
}

const H_GRID: [f64; 6] = [0.05, 0.25, 0.45, 0.5, 0.7, 0.95];

fn cholesky_check(o: &VerifyOptions) -> Outcome {
    let n = o.n.unwrap_or(300);
    let mut worst: f64 = 0.0;
    for h in H_GRID {
        let r = build_r(h, n).map_err(e)?;
        let back = cholesky(&r).map_err(|err| format!("H = {h}: {err}"))?.reconstruct();
        let err = r.as_slice().iter().zip(back.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(err / r.max_abs());
    }
    verdict(worst <= 1e-12, format!("N = {n}, H in {H_GRID:?}: max relative error {worst:.2e}"))
}

fn hadamard_positivity(o: &VerifyOptions) -> Outcome {
    let n = o.n.unwrap_or(100);
    let mut failures = Vec::new();
    for h in H_GRID {
        let r = build_r(h, n).map_err(e)?;
        if cholesky(&r).is_ok() && cholesky(&hadamard_power(&r, 2)).is_err() {
            failures.push(h);
        }
    }
    verdict(failures.is_empty(), format!("N = {n}: failures at H = {failures:?}"))
}

fn exact_matrix(o: &VerifyOptions) -> Outcome {
    let n_max = o.n.unwrap_or(100);
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        let exact = build_m_exact(n).map_err(e)?;
        let r = build_r(0.5, n).map_err(e)?;
        let float = inverse_times(&r, &hadamard_power(&r, 2)).map_err(e)?;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((exact.get(i, j) as f64 - float.get(i, j)).abs());
            }
        }
    }
    verdict(worst <= 1e-10, format!("N <= {n_max}: max difference {worst:.2e}"))
}

fn unit_determinant(o: &VerifyOptions) -> Outcome {
    let n_max = o.n.unwrap_or(200);
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        worst = worst.max(log_det(&build_r(0.5, n).map_err(e)?).map_err(e)?.abs());
    }
    verdict(worst <= 1e-10, format!("N <= {n_max}: max |log det| {worst:.2e}"))
}

fn eigen_cross_check(o: &VerifyOptions) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let mut rng = stream(o.seed ^ 0xE1, i);
        let n = rng.gen_range(1..=8);
        let a = SymMatrix::from_upper_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let q = sym_eigen(&a, false).map_err(e)?;
        let j = sym_eigen_jacobi(&a).map_err(e)?;
        for (x, y) in q.values.iter().zip(&j.values) {
            worst = worst.max((x - y).abs());
        }
    }
    verdict(worst <= 1e-12, format!("200 random matrices, max difference {worst:.2e}"))
}

fn odd_spectrum(o: &VerifyOptions) -> Outcome {
    let n_max = o.n.unwrap_or(50);
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        let r = build_r(0.5, n).map_err(e)?;
        let s = gen_eigen_spd(&hadamard_power(&r, 2), &r, false).map_err(e)?;
        for (k, l) in s.values.iter().enumerate() {
            let want = (2 * k + 1) as f64;
            worst = worst.max((l - want).abs() / want);
        }
    }
    verdict(worst <= 1e-9, format!("N <= {n_max}: max relative error {worst:.2e}"))
}

fn kappa_cauchy(o: &VerifyOptions) -> Outcome {
    let n = o.n.unwrap_or(25);
    let exact = kappa(1.0, n).map_err(e)?.kappa;
    let r = build_r(0.5, n).map_err(e)?;
    let float = gen_eigen_spd(&hadamard_power(&r, 2), &r, false).map_err(e)?.min();
    verdict(
        exact == 1.0 && (float - 1.0).abs() <= 1e-9,
        format!("N = {n}: exact {exact}, float pencil {float:.15}"),
    )
}

fn kappa_plateau(_: &VerifyOptions) -> Outcome {
    let a = kappa(1.5, 300).map_err(e)?.kappa;
    let b = kappa(1.8, 300).map_err(e)?.kappa;
    verdict(
        (a - 0.899).abs() <= 0.005 && (b - 0.594).abs() <= 0.005,
        format!("kappa(1.5,300) = {a:.6}, kappa(1.8,300) = {b:.6}"),
    )
}

fn lower_bound(o: &VerifyOptions) -> Outcome {
    let n = o.n.unwrap_or(200).max(2);
    let gammas = o.gamma.map(|g| vec![g]).unwrap_or_else(|| vec![0.2, 0.4, 0.6, 0.8, 1.0]);
    if gammas.iter().any(|&g| g > 1.0) {
        return Err("the lower bound is only claimed for gamma <= 1".into());
    }
    let mut worst = f64::INFINITY;
    for &g in &gammas {
        for r in kappa_sequence(g, n).map_err(e)? {
            worst = worst.min(r.kappa);
        }
    }
    verdict(worst >= 0.5 - 1e-9, format!("gamma {gammas:?}, N <= {n}: min kappa {worst:.6}"))
}

fn z_matrix(o: &VerifyOptions) -> Outcome {
    if let Some(h) = o.h {
        let n = o.n.unwrap_or(200).max(2);
        let z = zmatrix_point(h, n).map_err(e)?;
        let detail = format!("H = {h}, N = {n}: max off-diagonal {:.3e}", z.max_offdiag);
        return Ok(match (h > 0.5, z.pass) {
            (false, true) => (Status::Pass, detail),
            (false, false) => (Status::Fail, detail),
            (true, false) => (Status::ExpectedFail, detail),
            (true, true) => (Status::UnexpectedPass, detail),
        });
    }
    let n_max = o.n.unwrap_or(200).max(2);
    let hs: Vec<f64> = (1..=10).map(|k| k as f64 * 0.05).collect();
    let rows = zmatrix_scan(&hs, n_max).map_err(e)?;
    let failing = rows.iter().filter(|r| !r.pass).count();
    let chol = rows.iter().filter(|r| !r.cholesky_nonneg).count();
    let smooth_detected = [0.6, 0.7, 0.8]
        .iter()
        .map(|&h| zmatrix_point(h, 10).map(|z| !z.pass))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    verdict(
        failing == 0 && smooth_detected.iter().all(|&d| d),
        format!(
            "{} points H <= 0.5, N <= {n_max}: {failing} failing, {chol} with a negative Cholesky entry; \
             H = 0.6/0.7/0.8 at N = 10 fail as predicted: {smooth_detected:?}",
            rows.len()
        ),
    )
}

fn perron(o: &VerifyOptions) -> Outcome {
    let n = o.n.unwrap_or(50);
    let mut bad = Vec::new();
    for h in [0.1, 0.2, 0.3, 0.4, 0.5] {
        if !perron_check(h, n).map_err(e)?.nonnegative {
            bad.push(h);
        }
    }
    let smooth = perron_check(0.9, n).map_err(e)?.sign_changes;
    verdict(
        bad.is_empty() && smooth >= 1,
        format!("N = {n}: negative entries for H <= 0.5 at {bad:?}; H = 0.9 has {smooth} sign changes"),
    )
}

fn monotone(o: &VerifyOptions) -> Outcome {
    let n = o.n.unwrap_or(120).max(2);
    let gammas = o.gamma.map(|g| vec![g]).unwrap_or_else(|| vec![0.3, 0.7, 1.0, 1.3, 1.7]);
    let mut worst = f64::INFINITY;
    for &g in &gammas {
        for r in kappa_sequence(g, n).map_err(e)? {
            worst = worst.min(r.decrement.unwrap_or(0.0));
        }
    }
    verdict(worst >= -1e-10, format!("gamma {gammas:?}, N <= {n}: min decrement {worst:.2e}"))
}

fn decay(o: &VerifyOptions) -> Outcome {
    let gammas = o.gamma.map(|g| vec![g]).unwrap_or_else(|| vec![0.5, 1.5, 1.8]);
    let mut parts = Vec::new();
    let mut ok = true;
    for &g in &gammas {
        let f = decay_exponent_fit(g, 30, 300).map_err(e)?;
        ok &= f.exponent > 2.0 && f.min_decrement >= -1e-10;
        parts.push(format!("{g}: {:.3}", f.exponent));
    }
    verdict(ok, format!("N = 30..300 exponents {}", parts.join(", ")))
}

fn quadratic(o: &VerifyOptions) -> Outcome {
    let n = o.n.unwrap_or(200);
    let right = quadratic_fit_c(&DEFAULT_EPS_GRID, n, Side::Right).map_err(e)?.c;
    let left = quadratic_fit_c(&DEFAULT_EPS_GRID, n, Side::Left).map_err(e)?.c;
    verdict(
        (0.24..=0.30).contains(&right) && (0.20..=0.34).contains(&left),
        format!("N = {n}: c = {right:.5} (1+eps), {left:.5} (1-eps)"),
    )
}

fn random_poly(rng: &mut impl Rng, max_freq: i64, terms: usize) -> TrigPoly {
    TrigPoly::from_terms((0..terms).map(|_| {
        (
            rng.gen_range(-max_freq..=max_freq),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        )
    }))
}

fn hadamard_square(o: &VerifyOptions) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let mut rng = stream(o.seed, i);
        let g = o.gamma.unwrap_or_else(|| rng.gen_range(0.02..1.98));
        let p = StableParams::new(g).map_err(e)?;
        let terms = rng.gen_range(1..=8);
        let f = random_poly(&mut rng, 8, terms);
        worst = worst.max(gamma2_definition(&p, &f).max_abs_diff(&gamma2_hadamard(&p, &f)));
    }
    verdict(worst <= 1e-10, format!("200 random cases, max coefficient difference {worst:.2e}"))
}

fn single_mode(o: &VerifyOptions) -> Outcome {
    let gammas = o.gamma.map(|g| vec![g]).unwrap_or_else(|| vec![0.5, 1.0, 1.3, 1.7]);
    let grid: Vec<f64> = (0..100).map(|j| j as f64 * TAU / 100.0).collect();
    let mut worst: f64 = 0.0;
    for &g in &gammas {
        for w in [0.0, 0.5, 1.5] {
            let p = StableParams::with_drift(g, w).map_err(e)?;
            let f = TrigPoly::cos(1);
            let (num, den) = (drift_gamma2(&p, &f), carre_du_champ(&p, &f, &f));
            for &x in &grid {
                let r = num.eval(x).re / den.eval(x).re;
                worst = worst.max((r - drift_single_mode_ratio(g, w, x)).abs());
            }
        }
        let p = StableParams::new(g).map_err(e)?;
        for n in 1..=3u64 {
            let f = TrigPoly::cos(n as i64);
            let (num, den) = (gamma2_definition(&p, &f), carre_du_champ(&p, &f, &f));
            for &x in &grid {
                let r = num.eval(x).re / den.eval(x).re;
                worst = worst.max((r - single_mode_ratio(g, n, x)).abs());
            }
        }
    }
    verdict(worst <= 1e-10, format!("gamma {gammas:?}: max pointwise difference {worst:.2e}"))
}

fn oracle_positivity(o: &VerifyOptions) -> Outcome {
    let mut worst_im: f64 = 0.0;
    let mut worst_neg: f64 = 0.0;
    for i in 0..100u64 {
        let mut rng = stream(o.seed ^ 0x0A, i);
        let g = o.gamma.unwrap_or_else(|| rng.gen_range(0.02..1.98));
        let w = rng.gen_range(0.0..2.0);
        let p = StableParams::with_drift(g, w).map_err(e)?;
        let n = rng.gen_range(1..=6);
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = TrigPoly::real_from_cos_sin(&c, &s);
        let norm = f.l2_sq();
        let g2 = gamma2_definition(&p, &f);
        let fields = [carre_du_champ(&p, &f, &f), g2.clone(), drift_gamma2(&p, &f)];
        for x in TrigPoly::grid(64) {
            for fld in &fields {
                let v = fld.eval(x);
                worst_im = worst_im.max(v.im.abs() / v.norm().max(1e-300));
            }
            worst_neg = worst_neg.max(-g2.eval(x).re / norm);
        }
    }
    verdict(
        worst_im <= 1e-12 && worst_neg <= 1e-10,
        format!("100 random real f: max relative imaginary part {worst_im:.2e}, max negativity {worst_neg:.2e}"),
    )
}

fn scalar_shift(o: &VerifyOptions) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let mut rng = stream(o.seed ^ 0x55, i);
        let w = rng.gen_range(0.0..2.0);
        let p = StableParams::with_drift(1.0, w).map_err(e)?;
        let n = rng.gen_range(1..=12);
        let f = TrigPoly::from_terms(
            (1..=n).map(|k| (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
        );
        let want = TrigPoly::cos(1).scale_re(0.5 * w).mul(&carre_du_champ(&p, &f, &f));
        worst = worst.max(drift_correction(&p, &f).max_abs_diff(&want));
    }
    verdict(worst <= 1e-10, format!("100 positive-frequency f: max coefficient difference {worst:.2e}"))
}

fn drift_matrix(o: &VerifyOptions) -> Outcome {
    let n_max = o.n.unwrap_or(20);
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        let mut rng = stream(o.seed ^ 0xD0, n as u64);
        for _ in 0..3 {
            let w = rng.gen_range(0.0..2.0);
            let x = rng.gen_range(0.0..TAU);
            worst = worst.max(extract_d0(w, n, x).max_deviation);
        }
    }
    verdict(worst <= 1e-12, format!("N <= {n_max}, random (w^2, x): max deviation {worst:.2e}"))
}

fn drift_kappa(o: &VerifyOptions) -> Outcome {
    let n = o.n.unwrap_or(20);
    let mut worst: f64 = 0.0;
    let mut at_pi = true;
    for w in [0.5, 1.0, 1.9] {
        let g = global_drift_kappa(w, n, DRIFT_GRID).map_err(e)?;
        worst = worst.max((g.kappa - (1.0 - w / 2.0)).abs());
        at_pi &= g.argmin_x == PI;
    }
    verdict(
        worst <= 1e-6 && at_pi,
        format!("N = {n}, w^2 in [0.5, 1, 1.9]: max error {worst:.2e}, minimum at x = pi: {at_pi}"),
    )
}

fn real_curv(o: &VerifyOptions) -> Outcome {
    let n = o.n.unwrap_or(10);
    let opts = RealCurvatureOptions { seed: o.seed, ..Default::default() };
    let r = real_curvature(1.0, n, &opts).map_err(e)?;
    verdict(
        (r.pencil_kappa - 1.0).abs() <= 1e-6 && (r.constrained_kappa - 1.0).abs() <= 1e-6,
        format!("N = {n}: pencil {:.10}, constrained {:.10}", r.pencil_kappa, r.constrained_kappa),
    )
}

fn contraction(_: &VerifyOptions) -> Outcome {
    let mut exact = true;
    for n in 1..=15usize {
        let df: u64 = (1..=n as u64).map(|k| 2 * k - 1).product();
        let p = contraction_profile(n).map_err(e)?;
        exact &= p.double_factorial == Some(df) && build_m_exact(n).map_err(e)?.det() == Some(df);
    }
    let worst = (1..=15)
        .map(|n| {
            let p = contraction_profile(n)?;
            Ok((p.volume_ratio_log - 0.5 * (p.double_factorial.unwrap_or(0) as f64).ln()).abs())
        })
        .collect::<stablecurv::Result<Vec<f64>>>()
        .map_err(e)?
        .into_iter()
        .fold(0.0, f64::max);
    let stirling = contraction_profile(1000).map_err(e)?.stirling_ratio;
    verdict(
        exact && worst <= 1e-10 && (stirling - 1.0).abs() <= 0.05,
        format!("exact N <= 15: {exact}; log volume error {worst:.2e}; Stirling ratio at N = 1000 {stirling:.5}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), CHECKS.len());
    }

    #[test]
    fn selection() {
        assert_eq!(select(None).unwrap().len(), CHECKS.len());
        assert_eq!(select(Some("perron, decay")).unwrap().len(), 2);
        assert!(select(Some("nope")).is_err());
        assert!(select(Some(",")).is_err());
    }

    #[test]
    fn expected_fail_above_half() {
        let opts = VerifyOptions { gamma: None, h: Some(0.7), n: Some(10), seed: 1 };
        let rows = run_checks(Some("z-matrix"), &opts, |_| {}).unwrap();
        assert_eq!(rows[0].status, Status::ExpectedFail);
        assert!(!rows[0].status.is_failure());
    }
}
