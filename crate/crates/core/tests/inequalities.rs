mod common;

use common::{evaluator, random_real, random_symmetric, rng};
use expfun::inequalities::{
    dominance_gap, hankel_matrix, identity_residual, is_positive_definite, monotonicity_certificate,
    turan_ratio, turan_upper_bound, verify_sign, CertificateTag, DEFAULT_GRID,
};
use expfun::linalg::{cholesky, Cholesky};
use expfun::{FrequencyVector, PolynomialCoeffs};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A non-zero polynomial of degree ≤ `n` that is non-negative on `[lo, hi]`:
/// a square plus a non-negative constant.
fn nonnegative_polynomial(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> PolynomialCoeffs {
    let k = rng.gen_range(0..=n / 2);
    let p: Vec<f64> = (0..=k).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut coeffs = PolynomialCoeffs::square_of(&p).coeffs().to_vec();
    coeffs[0] += rng.gen_range(0.0..0.5) + 1e-3;
    let r = PolynomialCoeffs::new(coeffs).unwrap();
    assert!(r.is_nonnegative_on(lo, hi, 0.0));
    r
}

#[test]
fn dominance_under_certified_hypothesis() {
    let mut rng = rng(21);
    let b = 2.5;
    let mut checked = 0;
    while checked < 40 {
        let len = rng.gen_range(1..=7);
        let values = random_real(&mut rng, len, 2.0);
        let e = evaluator(&values);
        let n = e.n();
        if !verify_sign(&e, n + 1, 0.0, b, DEFAULT_GRID, 0.0).unwrap().is_nonnegative() {
            continue;
        }
        checked += 1;
        let r = nonnegative_polynomial(&mut rng, n, 0.0, b);
        assert_eq!(dominance_gap(&e, &r, 0.0).unwrap().abs(), 0.0);
        for i in 1..=64 {
            let x = b * i as f64 / 64.0;
            let gap = dominance_gap(&e, &r, x).unwrap();
            assert!(gap > 0.0, "{values:?} x={x} gap={gap}");
        }
    }
}

#[test]
fn hankel_positivity_and_lower_bound() {
    let mut rng = rng(22);
    let b = 3.0;
    let mut checked = 0;
    while checked < 30 {
        let len = rng.gen_range(3..=9);
        let values = random_real(&mut rng, len, 1.5);
        let e = evaluator(&values);
        let n = e.n();
        if !verify_sign(&e, n + 1, 0.0, b, DEFAULT_GRID, 0.0).unwrap().is_nonnegative() {
            continue;
        }
        checked += 1;
        for i in 1..=16 {
            let x = b * i as f64 / 16.0;
            for k in 0..=n / 2 {
                let h = hankel_matrix(&e, k, x).unwrap();
                assert!(is_positive_definite(&h, 0.0), "{values:?} k={k} x={x}");
                let p: Vec<f64> = (0..=k).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let poly: f64 = p.iter().rev().fold(0.0, |acc, c| acc * x + c);
                assert!(h.quadratic_form(&p) > poly * poly - 1e-9);
            }
        }
    }
}

#[test]
fn symmetric_vectors_satisfy_both_sided_inequalities() {
    let mut rng = rng(23);
    let (a, b) = (-2.0, 2.0);
    for _ in 0..20 {
        let len = rng.gen_range(2..=8);
        let values = random_symmetric(&mut rng, len, 2.0);
        let e = evaluator(&values);
        let n = e.n();
        assert!(verify_sign(&e, n + 1, 0.0, b, DEFAULT_GRID, 1e-12).unwrap().is_nonnegative());
        // Φ^{(n+1)} ≤ 0 on [A, 0].
        let lower = verify_sign(&e, n + 1, a, 0.0, DEFAULT_GRID, 0.0);
        let negated: Vec<f64> = (0..DEFAULT_GRID)
            .map(|i| a * i as f64 / (DEFAULT_GRID - 1) as f64)
            .map(|x| e.eval_derivative(n + 1, x).unwrap())
            .collect();
        assert!(lower.is_ok());
        assert!(negated.iter().all(|&v| v <= 1e-12), "{values:?}");

        let r = nonnegative_polynomial(&mut rng, n, a, b);
        for i in 1..=32 {
            for x in [a * i as f64 / 32.0, b * i as f64 / 32.0] {
                let gap = dominance_gap(&e, &r, x).unwrap();
                assert!(gap > 0.0, "{values:?} x={x} gap={gap}");
                if x.abs() >= 0.25 {
                    for k in 0..=n / 2 {
                        let h = hankel_matrix(&e, k, x).unwrap();
                        assert!(is_positive_definite(&h, 0.0), "{values:?} k={k} x={x}");
                    }
                }
            }
        }
    }
}

#[test]
fn identity_holds_for_complex_conjugate_frequencies() {
    let mut rng = rng(24);
    for _ in 0..30 {
        let len = rng.gen_range(1..=6);
        let f = common::random_conjugate_closed(&mut rng, len, 2.0);
        let e = expfun::build_evaluator(f);
        let n = e.n();
        let r = PolynomialCoeffs::new((0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let x = rng.gen_range(-2.0..2.0);
        let lhs = expfun::inequalities::basis_combination(&e, &r, x).unwrap();
        let res = identity_residual(&e, &r, x).unwrap();
        assert!(res <= 1e-8 * (1.0 + r.eval(x).abs() + lhs.abs()), "residual {res}");
    }
}

#[test]
fn turan_ratio_bounds_under_hypothesis() {
    let mut rng = rng(25);
    let b = 4.0;
    let mut checked = 0;
    while checked < 30 {
        let len = rng.gen_range(3..=8);
        let values = if checked % 2 == 0 { random_symmetric(&mut rng, len, 2.0) } else { random_real(&mut rng, len, 2.0) };
        let e = evaluator(&values);
        let n = e.n();
        if !verify_sign(&e, n + 1, 0.0, b, DEFAULT_GRID, 0.0).unwrap().is_nonnegative() {
            continue;
        }
        if !verify_sign(&e, 2, 0.0, b, DEFAULT_GRID, 0.0).unwrap().is_nonnegative() {
            continue;
        }
        checked += 1;
        let upper = turan_upper_bound(n).unwrap();
        for i in 1..=64 {
            let x = b * i as f64 / 64.0;
            let f = turan_ratio(&e, x).unwrap();
            assert!(f >= 1.0 - 1e-12 && f < upper + 1e-9, "{values:?} x={x} F={f}");
        }
    }
}

#[test]
fn log_derivative_is_non_increasing() {
    let mut rng = rng(26);
    for _ in 0..100 {
        let len = rng.gen_range(1..=7);
        let values = random_real(&mut rng, len, 2.5);
        let e = evaluator(&values);
        let ratios: Vec<f64> = (1..=128)
            .map(|i| {
                let d = e.derivatives(3.0 * i as f64 / 128.0, 1).unwrap();
                d[1] / d[0]
            })
            .collect();
        for w in ratios.windows(2) {
            assert!(w[1] <= w[0] + 1e-9 * (1.0 + w[0].abs()), "{values:?}: {} > {}", w[1], w[0]);
        }
    }
}

#[test]
fn certificates_are_consistent_with_sampling() {
    let mut rng = rng(27);
    for _ in 0..60 {
        let len = rng.gen_range(1..=7);
        let values = random_real(&mut rng, len, 2.0);
        let f = FrequencyVector::from_reals(&values).unwrap();
        let c = monotonicity_certificate(&f).unwrap();
        let e = evaluator(&values);
        let orders = c.certified_orders().unwrap_or(e.n() + 3);
        for m in 1..=orders {
            let r = verify_sign(&e, m, 0.01, 3.0, 512, 0.0).unwrap();
            assert!(r.is_nonnegative(), "{values:?} tag={:?} m={m}", c.tag);
        }
        if c.counter.is_some() {
            assert_eq!(c.tag, CertificateTag::None);
            assert!(expfun::inequalities::locate_critical_point(&e, 1024.0, 512).unwrap().is_some());
        }
    }
}

#[test]
fn cholesky_factor_of_hankel_reconstructs() {
    let e = evaluator(&[0.5, -0.5, 1.0, -1.0, 0.0]);
    let h = hankel_matrix(&e, 2, 1.3).unwrap();
    let Cholesky::Factor(l) = cholesky(&h.matrix, 0.0) else { panic!("not definite") };
    for i in 0..3 {
        for j in 0..3 {
            let v: f64 = (0..=i.min(j)).map(|t| l[i][t] * l[j][t]).sum();
            assert!((v - h.entry(i, j)).abs() < 1e-12 * (1.0 + h.entry(i, j).abs()));
        }
    }
}
