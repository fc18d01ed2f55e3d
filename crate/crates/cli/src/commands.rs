//! Table-producing commands.

use serde::Serialize;

use stablecurv::curvature::{drift_spectrum, landscape as landscape_rows, zmatrix_point, zmatrix_scan};
use stablecurv::eigensolve::gen_eigen_spd;
use stablecurv::matrices::{build_r, hadamard_power};
use stablecurv::oracle::{
    apply_generator, carre_du_champ, drift_apply, drift_gamma2, gamma2_definition, gamma2_hadamard, TrigPoly,
};
use stablecurv::StableParams;

use crate::grid::parse_grid;
use crate::output::{open, RowSink};
use crate::{Cli, CliError, Field, Progress};

fn sink(cli: &Cli) -> Result<RowSink, CliError> {
    Ok(RowSink::new(cli.format, open(cli.output.as_deref())?))
}

fn grid(s: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(s).map_err(CliError::Config)
}

#[derive(Serialize)]
struct SpectrumRow {
    k: usize,
    eigenvalue: f64,
    expected: Option<f64>,
    deviation: Option<f64>,
}

/// Full float spectrum of the pencil. At `γ = 1` each value is paired with
/// the odd integer it should equal.
pub fn spectrum(cli: &Cli, gamma: f64, n: usize, progress: Progress) -> Result<(), CliError> {
    let p = StableParams::new(gamma)?;
    if n == 0 {
        return Err(CliError::Config("--n must be at least 1".into()));
    }
    let r = build_r(p.hurst(), n)?;
    let s = gen_eigen_spd(&hadamard_power(&r, 2), &r, false)?;
    let mut out = sink(cli)?;
    let mut worst: f64 = 0.0;
    for (k, &eigenvalue) in s.values.iter().enumerate() {
        let expected = p.is_cauchy().then(|| (2 * k + 1) as f64);
        let deviation = expected.map(|e| (eigenvalue - e).abs());
        worst = worst.max(deviation.unwrap_or(0.0));
        out.row(&SpectrumRow { k: k + 1, eigenvalue, expected, deviation })?;
    }
    out.finish()?;
    if p.is_cauchy() {
        progress.note(format!("max deviation from odd integers: {worst:.3e}"));
    }
    Ok(())
}

pub fn landscape(cli: &Cli, grid_spec: &str, n: usize, progress: Progress) -> Result<(), CliError> {
    let gammas = grid(grid_spec)?;
    for &g in &gammas {
        StableParams::new(g)?;
    }
    let mut out = sink(cli)?;
    let chunk = rayon::current_num_threads().max(1);
    let mut done = 0;
    for part in gammas.chunks(chunk) {
        for row in landscape_rows(part, n)? {
            out.row(&row)?;
        }
        done += part.len();
        progress.note(format!("landscape: {done}/{} gamma values", gammas.len()));
    }
    out.finish()?;
    Ok(())
}

#[derive(Serialize)]
struct DriftRow {
    omega_sq: f64,
    n: usize,
    x: f64,
    lambda_min: f64,
    max_deviation: f64,
    global_kappa: f64,
    argmin_x: f64,
    predicted_global_kappa: f64,
}

pub fn drift(cli: &Cli, omega_sq: f64, n: usize, x: f64) -> Result<(), CliError> {
    let r = drift_spectrum(omega_sq, n, x)?;
    let mut out = sink(cli)?;
    out.row(&DriftRow {
        omega_sq,
        n,
        x: r.x,
        lambda_min: r.eigenvalues[0],
        max_deviation: r.max_deviation,
        global_kappa: r.global_kappa,
        argmin_x: r.argmin_x,
        predicted_global_kappa: 1.0 - omega_sq / 2.0,
    })?;
    out.finish()?;
    Ok(())
}

pub fn zmatrix(
    cli: &Cli,
    h_spec: &str,
    n_max: usize,
    single_n: Option<usize>,
    progress: Progress,
) -> Result<(), CliError> {
    let hs = grid(h_spec)?;
    let mut out = sink(cli)?;
    for (i, &h) in hs.iter().enumerate() {
        let rows = match single_n {
            Some(n) => vec![zmatrix_point(h, n)?],
            None => zmatrix_scan(&[h], n_max)?,
        };
        for row in &rows {
            out.row(row)?;
        }
        progress.note(format!("zmatrix: H = {h} done ({}/{})", i + 1, hs.len()));
    }
    out.finish()?;
    Ok(())
}

#[derive(Serialize)]
struct FieldRow {
    x: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CoeffRow {
    frequency: i64,
    re: f64,
    im: f64,
}

pub fn oracle(
    cli: &Cli,
    gamma: f64,
    omega_sq: f64,
    f_spec: &str,
    field: Field,
    grid_size: usize,
    coefficients: bool,
) -> Result<(), CliError> {
    let p = StableParams::with_drift(gamma, omega_sq)?;
    let f: TrigPoly = f_spec.parse()?;
    if grid_size == 0 && !coefficients {
        return Err(CliError::Config("--grid-size must be at least 1".into()));
    }
    let value = match field {
        Field::Generator => apply_generator(&p, &f),
        Field::Gamma => carre_du_champ(&p, &f, &f),
        Field::Gamma2 => gamma2_definition(&p, &f),
        Field::Gamma2Hadamard => gamma2_hadamard(&p, &f),
        Field::Drift => drift_apply(omega_sq, &f),
        Field::DriftGamma2 => drift_gamma2(&p, &f),
    };
    let mut out = sink(cli)?;
    if coefficients {
        out = out.with_columns(&["frequency", "re", "im"]);
    }
    if coefficients {
        for (frequency, c) in value.iter() {
            out.row(&CoeffRow { frequency, re: c.re, im: c.im })?;
        }
    } else {
        for x in TrigPoly::grid(grid_size) {
            let v = value.eval(x);
            out.row(&FieldRow { x, re: v.re, im: v.im })?;
        }
    }
    out.finish()?;
    Ok(())
}
