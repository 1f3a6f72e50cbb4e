use std::f64::consts::PI;

use proptest::prelude::*;
use sharpbound::bounds::{bohr_coeff, deriv_bound_coeff, increment_coeff, recentered_bohr_coeff};
use sharpbound::complex::{format_complex, parse_complex};
use sharpbound::extremal::{apply_transform, choose_phase, g_xi};
use sharpbound::geometry::dist_to_hull_boundary;
use sharpbound::harness::{run_suite, CorpusEntry, Inequality, SuiteGrid};
use sharpbound::series::{recenter, reciprocal};
use sharpbound::{AffineTransform, AnalyticFunction, Complex64, Disc, Domain, GxiParams, PowerSeries};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex_in(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(x, y)| c(x, y))
}

fn polynomial(coeffs: Vec<Complex64>) -> AnalyticFunction {
    let eval = coeffs.clone();
    let degree = coeffs.len() - 1;
    AnalyticFunction::new("poly", 1.0, move |z| eval.iter().rev().fold(c(0.0, 0.0), |acc, k| acc * z + k))
        .unwrap()
        .with_coefficients(move |n| {
            let mut out = vec![c(0.0, 0.0); n + 1];
            for (k, v) in coeffs.iter().enumerate().take(n + 1) {
                out[k] = *v;
            }
            out
        })
        .with_polynomial_degree(degree)
}

fn small_grid() -> SuiteGrid {
    SuiteGrid {
        thetas: vec![0.0, 2.0],
        ns: vec![1, 3],
        r_fractions: vec![0.3, 0.8],
        ra_fractions: vec![0.0, 1.0],
        ms: vec![1, 2],
        qs: vec![0.5, 2.0],
        a_fractions: vec![0.0, 0.4],
        increment_ns: vec![0, 2],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coefficients_scale_with_radius(n in 1u32..5, m in 1u32..4, q in 0.2..3.0f64, big_r in 0.3..4.0f64,
                                       fr in 0.05..0.95f64, fa in 0.0..1.0f64, lambda in prop::sample::select(vec![0.5, 2.0])) {
        let r = fr * big_r;
        let r_a = fa * r;
        let d = deriv_bound_coeff(n, big_r, r, r_a).unwrap();
        let d_scaled = deriv_bound_coeff(n, lambda * big_r, lambda * r, lambda * r_a).unwrap();
        prop_assert!((d_scaled * lambda.powi(n as i32) - d).abs() <= 1e-12 * d);
        let i = increment_coeff(n, big_r, r).unwrap();
        let i_scaled = increment_coeff(n, lambda * big_r, lambda * r).unwrap();
        prop_assert!((i_scaled * lambda.powi(n as i32) - i).abs() <= 1e-12 * i);
        let b = bohr_coeff(m, q, big_r, r).unwrap();
        prop_assert!((bohr_coeff(m, q, lambda * big_r, lambda * r).unwrap() - b).abs() <= 1e-12 * b);
        let d_a = big_r * (1.0 - 0.5 * fa);
        let rr = 0.9 * fr * d_a;
        let rb = recentered_bohr_coeff(big_r, d_a, rr).unwrap();
        prop_assert!((recentered_bohr_coeff(lambda * big_r, lambda * d_a, lambda * rr).unwrap() - rb).abs() <= 1e-12 * rb);
    }

    #[test]
    fn deriv_coefficient_decreases_in_r_a(n in 1u32..4, fr in 0.05..0.95f64, f1 in 0.0..1.0f64, f2 in 0.0..1.0f64) {
        let (lo, hi) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
        prop_assume!(hi - lo > 1e-6);
        let r = fr;
        prop_assert!(deriv_bound_coeff(n, 1.0, r, hi * r).unwrap() < deriv_bound_coeff(n, 1.0, r, lo * r).unwrap());
    }

    #[test]
    fn reciprocal_inverts_series(b0 in complex_in(1.0), rest in prop::collection::vec(complex_in(0.3), 1..6)) {
        let b0 = b0 + c(2.0, 0.0);
        let mut coeffs = vec![b0];
        coeffs.extend(rest);
        coeffs.resize(24, c(0.0, 0.0));
        let b = PowerSeries::new(c(0.0, 0.0), 1.0, coeffs).unwrap();
        let inv = reciprocal(&b).unwrap();
        let product = b.mul_truncated(&inv);
        for (k, v) in product.coeffs().iter().enumerate() {
            let want = if k == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) };
            prop_assert!((v - want).norm() < 1e-12, "k = {k}: {v}");
        }
    }

    #[test]
    fn recentered_polynomial_reproduces_values(coeffs in prop::collection::vec(complex_in(1.0), 1..6),
                                                a in complex_in(0.5), t in 0.0..1.0f64) {
        let f = polynomial(coeffs);
        let s = recenter(&f, a, 16).unwrap();
        let z = a + Complex64::from_polar(0.4 * s.validity_radius(), 2.0 * PI * t);
        let err = (s.eval(z).unwrap() - f.eval(z).unwrap()).norm();
        prop_assert!(err < 1e-10 * (1.0 + f.eval(z).unwrap().norm()), "{err:e}");
    }

    #[test]
    fn phase_rotates_onto_direction(w in complex_in(5.0), d in complex_in(5.0)) {
        prop_assume!(w.norm() > 1e-6 && d.norm() > 1e-6);
        let phi = choose_phase(w, d).unwrap();
        prop_assert!(phi > -PI && phi <= PI);
        let rotated = Complex64::from_polar(1.0, phi) * w;
        prop_assert!((rotated / rotated.norm() - d / d.norm()).norm() < 1e-12);
    }

    #[test]
    fn complex_text_roundtrip(z in complex_in(1e6)) {
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn extremal_family_passes_the_suite(rho in 1.05..3.0f64, theta in 0.0..(2.0 * PI), scale in 0.2..5.0f64,
                                        shift in complex_in(3.0), phase in -3.0..3.0f64) {
        let params = GxiParams::new(Complex64::from_polar(rho, theta), 1.0).unwrap();
        let t = AffineTransform::new(scale, shift, phase).unwrap();
        let f = apply_transform(&g_xi(params).unwrap(), t);
        let domain = Domain::Disc(Disc::new(shift, scale * params.image_radius()).unwrap());
        let entry = CorpusEntry::new("g_xi", f, domain).unwrap();
        let reports = run_suite(&entry, &small_grid(), &Inequality::ALL, 1e-6).unwrap();
        prop_assert!(!reports.is_empty());
        for r in &reports {
            prop_assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn deriv_check_ratio_is_transform_invariant(rho in 1.05..2.0f64, scale in 0.2..5.0f64,
                                                 shift in complex_in(3.0), phase in -3.0..3.0f64) {
        let params = GxiParams::new(c(rho, 0.0), 1.0).unwrap();
        let g = g_xi(params).unwrap();
        let moved = apply_transform(&g, AffineTransform::new(scale, shift, phase).unwrap());
        let base = Domain::Disc(Disc::new(c(0.0, 0.0), params.image_radius()).unwrap());
        let image = Domain::Disc(Disc::new(shift, scale * params.image_radius()).unwrap());
        let grid = SuiteGrid { ns: vec![2], r_fractions: vec![0.5], ra_fractions: vec![0.5], thetas: vec![0.0], ..SuiteGrid::default() };
        let a = run_suite(&CorpusEntry::new("g", g.clone(), base.clone()).unwrap(), &grid, &[Inequality::Deriv], 1e-6).unwrap();
        let b = run_suite(&CorpusEntry::new("g", moved.clone(), image.clone()).unwrap(), &grid, &[Inequality::Deriv], 1e-6).unwrap();
        prop_assert!((a[0].ratio - b[0].ratio).abs() < 1e-8 * a[0].ratio);
        let fa = g.eval(c(0.25, 0.0)).unwrap();
        let da = dist_to_hull_boundary(fa, &base).unwrap().distance;
        let db = dist_to_hull_boundary(moved.eval(c(0.25, 0.0)).unwrap(), &image).unwrap().distance;
        prop_assert!((db - scale * da).abs() < 1e-10 * (1.0 + db));
    }
}
