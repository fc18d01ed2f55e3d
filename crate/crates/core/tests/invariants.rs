use num_complex::Complex64;
use proptest::prelude::*;

use stablecurv::curvature::{drift_spectrum, kappa, kappa_sequence, landscape, real_curvature, RealCurvatureOptions};
use stablecurv::eigensolve::{gen_eigen_spd, sym_eigen};
use stablecurv::kernels::{abs_pow, cross_sign, fbm_covariance, psi, SignClass};
use stablecurv::matrices::{build_r, cholesky, hadamard_power, SymMatrix};
use stablecurv::oracle::{
    carre_du_champ, drift_apply, drift_correction, drift_gamma2, gamma2_definition, gamma2_hadamard, TrigPoly,
};
use stablecurv::StableParams;

fn gamma() -> impl Strategy<Value = f64> {
    0.02f64..1.98
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// `Σ_{n=1}^N a_n e^{inx}` with `N <= 12`.
fn positive_poly() -> impl Strategy<Value = (usize, Vec<Complex64>)> {
    (1usize..=12).prop_flat_map(|n| (Just(n), prop::collection::vec(coeff(), n)))
}

fn from_positive(a: &[Complex64]) -> TrigPoly {
    TrigPoly::from_terms(a.iter().enumerate().map(|(k, &c)| (k as i64 + 1, c)))
}

fn real_poly() -> impl Strategy<Value = TrigPoly> {
    (1usize..=6)
        .prop_flat_map(|n| {
            (
                -1.0f64..1.0,
                prop::collection::vec(-1.0f64..1.0, n),
                prop::collection::vec(-1.0f64..1.0, n),
            )
        })
        .prop_map(|(c0, c, s)| TrigPoly::constant(c0).add(&TrigPoly::real_from_cos_sin(&c, &s)))
}

fn support_poly() -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((-8i64..=8, coeff()), 1..=8).prop_map(TrigPoly::from_terms)
}

/// Hermitian form `v* M v` for real symmetric `M`.
fn herm_form(m: &SymMatrix, v: &[Complex64]) -> Complex64 {
    let n = v.len();
    let mut s = Complex64::default();
    for i in 0..n {
        for j in 0..n {
            s += v[i].conj() * m.get(i, j) * v[j];
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_is_symmetric_and_matches_fbm(g in gamma(), n in 1u32..200, m in 1u32..200) {
        let p = StableParams::new(g).unwrap();
        let (x, y) = (n as f64, m as f64);
        prop_assert_eq!(psi(&p, x, y), psi(&p, y, x));
        prop_assert!((psi(&p, x, x) - abs_pow(x, g)).abs() <= 1e-13 * abs_pow(x, g));
        let r = fbm_covariance(g / 2.0, x, y).unwrap();
        prop_assert!((psi(&p, x, y) - r).abs() <= 1e-12 * abs_pow(x.max(y), g));
    }

    #[test]
    fn cross_sign_follows_gamma(g in gamma(), n in 1u64..500, m in 1u64..500) {
        let p = StableParams::new(g).unwrap();
        let c = cross_sign(&p, n, m);
        let want = if g < 1.0 { SignClass::Positive } else if g > 1.0 { SignClass::Negative } else { SignClass::Zero };
        prop_assert_eq!(c.class, want);
    }

    #[test]
    fn kernel_matrix_on_any_frequency_set_is_psd(
        g in gamma(),
        freqs in prop::collection::btree_set(-30i64..=30, 1..12),
    ) {
        let p = StableParams::new(g).unwrap();
        let f: Vec<f64> = freqs.into_iter().map(|x| x as f64).collect();
        let k = SymMatrix::from_upper_fn(f.len(), |i, j| psi(&p, f[i], f[j]));
        let scale = k.max_abs().max(1.0);
        prop_assert!(sym_eigen(&k, false).unwrap().min() >= -1e-10 * scale);
        prop_assert!(sym_eigen(&hadamard_power(&k, 2), false).unwrap().min() >= -1e-10 * scale * scale);
    }

    #[test]
    fn cholesky_reconstructs_and_hadamard_keeps_definiteness(h in 0.02f64..0.98, n in 1usize..=100) {
        let r = build_r(h, n).unwrap();
        if let Ok(l) = cholesky(&r) {
            let back = l.reconstruct();
            let err = r.as_slice().iter().zip(back.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-12 * r.max_abs());
            prop_assert!(cholesky(&hadamard_power(&r, 2)).is_ok());
        }
    }

    #[test]
    fn hadamard_square_identity(g in gamma(), f in support_poly()) {
        let p = StableParams::new(g).unwrap();
        prop_assert!(gamma2_definition(&p, &f).max_abs_diff(&gamma2_hadamard(&p, &f)) <= 1e-10);
    }

    #[test]
    fn oracle_agrees_with_phase_stripped_matrices(g in gamma(), (n, a) in positive_poly()) {
        let p = StableParams::new(g).unwrap();
        let f = from_positive(&a);
        let gam = carre_du_champ(&p, &f, &f);
        let gam2 = gamma2_definition(&p, &f);
        let r = build_r(g / 2.0, n).unwrap();
        let r2 = hadamard_power(&r, 2);
        for x in TrigPoly::grid(64) {
            let v: Vec<Complex64> = a.iter().enumerate()
                .map(|(k, &c)| c * Complex64::from_polar(1.0, (k + 1) as f64 * x))
                .collect();
            let scale = r2.max_abs().max(1.0);
            prop_assert!((gam.eval(x) - herm_form(&r, &v)).norm() <= 1e-10 * scale);
            prop_assert!((gam2.eval(x) - herm_form(&r2, &v)).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn real_inputs_give_real_fields(g in gamma(), w in 0.0f64..2.0, f in real_poly()) {
        let p = StableParams::with_drift(g, w).unwrap();
        for field in [carre_du_champ(&p, &f, &f), gamma2_definition(&p, &f), drift_gamma2(&p, &f)] {
            let scale = field.max_abs_coeff().max(1e-300);
            for x in TrigPoly::grid(64) {
                prop_assert!(field.eval(x).im.abs() <= 1e-12 * scale * field.len().max(1) as f64);
            }
        }
    }

    #[test]
    fn drift_is_a_scalar_shift_at_cauchy_point(w in 0.0f64..2.0, (_n, a) in positive_poly()) {
        let p = StableParams::with_drift(1.0, w).unwrap();
        let f = from_positive(&a);
        let want = TrigPoly::cos(1).scale_re(0.5 * w).mul(&carre_du_champ(&p, &f, &f));
        prop_assert!(drift_correction(&p, &f).max_abs_diff(&want) <= 1e-10);
        let total = drift_gamma2(&p, &f).sub(&gamma2_definition(&p, &f));
        prop_assert!(total.max_abs_diff(&want) <= 1e-10);
    }

    #[test]
    fn drift_never_couples_opposite_signs(w in 0.1f64..2.0, (_n, a) in positive_poly(), (_m, b) in positive_poly()) {
        let p = StableParams::new(1.0).unwrap();
        let f = from_positive(&a);
        let g = TrigPoly::from_terms(b.iter().enumerate().map(|(k, &c)| (-(k as i64) - 1, c)));
        prop_assert!(carre_du_champ(&p, &f, &drift_apply(w, &g)).max_abs_coeff() <= 1e-12);
        prop_assert!(carre_du_champ(&p, &drift_apply(w, &f), &g).max_abs_coeff() <= 1e-12);
    }

    #[test]
    fn gamma2_is_pointwise_nonnegative(g in gamma(), f in real_poly()) {
        let p = StableParams::new(g).unwrap();
        let g2 = gamma2_definition(&p, &f);
        let norm = f.l2_sq();
        for x in TrigPoly::grid(64) {
            prop_assert!(g2.eval(x).re >= -1e-10 * norm);
        }
    }

    #[test]
    fn literal_roundtrip(f in support_poly()) {
        let back: TrigPoly = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kappa_is_nonnegative_and_monotone(g in gamma(), n_max in 2usize..40) {
        let seq = kappa_sequence(g, n_max).unwrap();
        for r in &seq {
            prop_assert!(r.kappa >= -1e-10);
            prop_assert!(r.kappa <= 1.0 + 1e-9);
        }
        for w in seq.windows(2) {
            prop_assert!(w[1].kappa <= w[0].kappa + 1e-10);
        }
    }

    #[test]
    fn two_modes_are_strictly_suboptimal(g in gamma()) {
        prop_assume!((g - 1.0).abs() >= 1e-3);
        prop_assert!(kappa(g, 2).unwrap().kappa < 1.0);
    }

    #[test]
    fn drift_shifts_every_eigenvalue_equally(w in 0.0f64..2.0, x in 0.0f64..std::f64::consts::TAU, i in 0usize..4) {
        let n = [2, 5, 10, 20][i];
        let r = drift_spectrum(w, n, x).unwrap();
        let shift = 0.5 * w * x.cos();
        for (k, l) in r.eigenvalues.iter().enumerate() {
            prop_assert!((l - (2 * k + 1) as f64 - shift).abs() <= 1e-9);
        }
        prop_assert!((r.global_kappa - (1.0 - w / 2.0)).abs() <= 1e-9);
    }
}

#[test]
fn landscape_is_monotone_in_n() {
    let grid = [0.3, 0.9, 1.0, 1.1, 1.7];
    let small = landscape(&grid, 20).unwrap();
    let large = landscape(&grid, 60).unwrap();
    for (s, l) in small.iter().zip(&large) {
        assert!(l.kappa <= s.kappa + 1e-10);
    }
}

#[test]
fn real_pencil_agrees_with_positive_pencil_at_cauchy_point() {
    for n in [1, 3, 8] {
        let r = real_curvature(1.0, n, &RealCurvatureOptions::default()).unwrap();
        assert!((r.pencil_kappa - kappa(1.0, n).unwrap().kappa).abs() <= 1e-9);
    }
}

#[test]
fn sweeps_do_not_depend_on_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| kappa_sequence(1.37, 60).unwrap())
    };
    let one = run(1);
    let four = run(4);
    for (a, b) in one.iter().zip(&four) {
        assert_eq!(a.kappa.to_bits(), b.kappa.to_bits());
    }
}

#[test]
fn float_pencil_at_cauchy_point_matches_exact_path() {
    for n in [2, 17, 64] {
        let r = build_r(0.5, n).unwrap();
        let s = gen_eigen_spd(&hadamard_power(&r, 2), &r, false).unwrap();
        assert!((s.min() - kappa(1.0, n).unwrap().kappa).abs() < 1e-9);
    }
}
