use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stablecurv"))
        .args(args)
        .env_remove("STABLECURV_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(idx).expect("cell").to_string()).collect()
}

fn floats(cells: &[String]) -> Vec<f64> {
    cells.iter().map(|c| c.parse().expect("float cell")).collect()
}

#[test]
fn spectrum_at_cauchy_point_is_odd() {
    let o = run(&["spectrum", "--gamma", "1", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("k,eigenvalue,expected,deviation\n"));
    assert!(!text.contains('\r'));
    let values = floats(&csv_column(&text, "eigenvalue"));
    for (k, v) in values.iter().enumerate() {
        assert!((v - (2 * k + 1) as f64).abs() <= 1e-9);
    }
    assert_eq!(values.len(), 5);
    for d in floats(&csv_column(&text, "deviation")) {
        assert!(d <= 1e-9);
    }
}

#[test]
fn spectrum_single_mode() {
    let o = run(&["spectrum", "--gamma", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(floats(&csv_column(&stdout(&o), "eigenvalue")), vec![1.0]);
}

#[test]
fn spectrum_plateau_at_one_and_a_half() {
    let o = run(&["spectrum", "--gamma", "1.5", "--n", "300", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let min = v[0]["eigenvalue"].as_f64().unwrap();
    assert!((min - 0.899).abs() <= 0.005, "{min}");
    assert!(v[0]["expected"].is_null());
}

#[test]
fn landscape_peaks_at_cauchy_point() {
    let o = run(&["landscape", "--grid", "0.1:1.9:0.1", "--n", "200", "-q"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stderr.is_empty());
    let text = stdout(&o);
    let gammas = floats(&csv_column(&text, "gamma"));
    let kappas = floats(&csv_column(&text, "kappa"));
    assert_eq!(gammas.len(), 19);
    let best = (0..kappas.len()).max_by(|&a, &b| kappas[a].total_cmp(&kappas[b])).unwrap();
    assert_eq!(gammas[best], 1.0);
    assert_eq!(kappas[best], 1.0);
}

#[test]
fn drift_global_curvature() {
    for (w, want) in [("1", 0.5), ("0", 1.0)] {
        let o = run(&["drift", "--omega-sq", w, "--n", "20"]);
        assert_eq!(o.status.code(), Some(0));
        let k = floats(&csv_column(&stdout(&o), "global_kappa"))[0];
        assert!((k - want).abs() <= 1e-6, "omega^2 = {w}: {k}");
    }
}

#[test]
fn zmatrix_single_points() {
    let o = run(&["zmatrix", "--h-grid", "0.3,0.7", "--n", "10", "-q"]);
    assert_eq!(o.status.code(), Some(0));
    let pass = csv_column(&stdout(&o), "pass");
    assert_eq!(pass, vec!["true", "false"]);
}

#[test]
fn zmatrix_scan_covers_every_size() {
    let o = run(&["zmatrix", "--h-grid", "0.25", "--n-max", "30", "-q"]);
    assert_eq!(o.status.code(), Some(0));
    let pass = csv_column(&stdout(&o), "pass");
    assert_eq!(pass.len(), 29);
    assert!(pass.iter().all(|p| p == "true"));
}

#[test]
fn oracle_fields_and_coefficients() {
    let o = run(&["oracle", "--gamma", "1", "--f", "(1,1,0)", "--field", "generator", "--coefficients"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "frequency,re,im\n1,-1.0000000000000000e0,0.0000000000000000e0\n");

    let o = run(&["oracle", "--gamma", "1.3", "--f", "(1,0.5,0),(-1,0.5,0)", "--grid-size", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(csv_column(&text, "x").len(), 16);
    for im in floats(&csv_column(&text, "im")) {
        assert!(im.abs() <= 1e-12);
    }
    for re in floats(&csv_column(&text, "re")) {
        assert!(re >= 0.0);
    }

    let o = run(&["oracle", "--gamma", "1", "--f", "", "--coefficients"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "frequency,re,im\n");
}

#[test]
fn verify_cross_sign_at_cauchy_point() {
    let o = run(&["verify", "--only", "cross-sign", "--gamma", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["status"], "pass");
    assert!(v[0]["detail"].as_str().unwrap().contains("2500 exact zeros"));
}

#[test]
fn verify_smooth_zmatrix_is_expected_fail() {
    let o = run(&["verify", "--only", "z-matrix", "--h", "0.7", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_column(&stdout(&o), "status"), vec!["expected-fail"]);
}

#[test]
fn verify_default_suite_passes() {
    let o = run(&["verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert!(rows.len() >= 20);
    for r in rows {
        assert_eq!(r["status"], "pass", "{r}");
    }
    // Timing is reported on the error stream.
    assert!(String::from_utf8_lossy(&o.stderr).contains("decay"));
}

#[test]
fn verify_list_names_checks() {
    let o = run(&["verify", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["cross-sign", "z-matrix", "odd-spectrum", "contraction"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn report_recomputes_reference_numbers() {
    let o = run(&["report", "-q"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = v.as_array().unwrap();
    let keys: Vec<&String> = entries[0].as_object().unwrap().keys().collect();
    assert_eq!(&keys[..6], ["claim", "paper_location", "expected", "computed", "tolerance", "pass"]);
    let find = |claim: &str| entries.iter().find(|e| e["claim"] == claim).unwrap_or_else(|| panic!("{claim}"));
    let k = find("kappa(1.5) limit");
    assert_eq!(k["expected"], 0.899);
    assert_eq!(k["tolerance"], 0.005);
    assert_eq!(k["pass"], true);
    assert_eq!(find("odd spectrum N=50")["pass"], true);
    let c = find("quadratic coefficient c");
    assert_eq!(c["expected"], 0.267);
    assert_eq!(c["tolerance"], 0.03);
    assert_eq!(c["pass"], true);
    for e in entries {
        assert_eq!(e["pass"], true, "{e}");
        assert!(!e["paper_location"].as_str().unwrap().is_empty());
    }
}

#[test]
fn configuration_errors_exit_one() {
    for args in [
        &["spectrum", "--gamma", "2.5", "--n", "5"][..],
        &["spectrum", "--gamma", "1", "--n", "0"],
        &["landscape", "--grid", "1:0:0.1"],
        &["oracle", "--gamma", "1", "--f", "(1,2"],
        &["drift", "--omega-sq", "-1"],
        &["verify", "--only", "no-such-check"],
        &["verify", "--only", "z-matrix", "--h", "1.5"],
        &["spectrum", "--gamma", "1", "--n", "3", "--threads", "0"],
        &["no-such-command"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["landscape", "--grid", "0.3,0.9,1,1.4", "--n", "60", "-q"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);

    let args = ["verify", "--only", "hadamard-square,oracle-positivity,psi-kernel", "--seed", "7", "-q"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn threads_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_stablecurv"))
        .args(["spectrum", "--gamma", "1", "--n", "2"])
        .env("STABLECURV_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn writes_to_output_file() {
    let dir = std::env::temp_dir().join(format!("stablecurv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.json");
    let o = run(&["spectrum", "--gamma", "1", "--n", "3", "--format", "json", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["k", "eigenvalue", "expected", "deviation"]);
    assert_eq!(v[2]["eigenvalue"], 5.0);
    std::fs::remove_dir_all(&dir).unwrap();
}
