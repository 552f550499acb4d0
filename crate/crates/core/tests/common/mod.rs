#![allow(dead_code)]

use expfun::{build_evaluator, FrequencyVector, FundamentalEvaluator};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn evaluator(values: &[f64]) -> FundamentalEvaluator {
    build_evaluator(FrequencyVector::from_reals(values).unwrap())
}

/// `len` real frequencies drawn from `[-range, range]`.
pub fn random_real(rng: &mut ChaCha8Rng, len: usize, range: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-range..=range)).collect()
}

/// Real frequencies with pairwise gaps of at least `gap`.
pub fn random_separated(rng: &mut ChaCha8Rng, len: usize, range: f64, gap: f64) -> Vec<f64> {
    loop {
        let v = random_real(rng, len, range);
        let ok = (0..len).all(|i| (i + 1..len).all(|j| (v[i] - v[j]).abs() >= gap));
        if ok {
            return v;
        }
    }
}

/// Conjugate-closed vector of exactly `len` entries: real entries plus
/// conjugate pairs, shuffled.
pub fn random_conjugate_closed(rng: &mut ChaCha8Rng, len: usize, range: f64) -> FrequencyVector {
    let mut entries = Vec::with_capacity(len);
    while entries.len() < len {
        if len - entries.len() >= 2 && rng.gen_bool(0.5) {
            let z = Complex64::new(rng.gen_range(-range..=range), rng.gen_range(0.1..=range));
            entries.push(z);
            entries.push(z.conj());
        } else {
            entries.push(Complex64::new(rng.gen_range(-range..=range), 0.0));
        }
    }
    entries.shuffle(rng);
    FrequencyVector::new(entries).unwrap()
}

/// Symmetric real vector `{±μ₁, …, ±μ_p}` with an extra 0 when `len` is odd.
pub fn random_symmetric(rng: &mut ChaCha8Rng, len: usize, range: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len / 2 {
        let mu = rng.gen_range(0.0..=range);
        v.push(mu);
        v.push(-mu);
    }
    if len % 2 == 1 {
        v.push(0.0);
    }
    v.shuffle(rng);
    v
}

/// `h_d` by summing `∏ λ^α` over all multi-indices `|α| = d`.
pub fn brute_force_homogeneous(vars: &[Complex64], degree: usize) -> Complex64 {
    fn go(vars: &[Complex64], degree: usize, acc: Complex64) -> Complex64 {
        match vars.split_first() {
            None => {
                if degree == 0 {
                    acc
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Some((&first, rest)) => {
                let mut total = Complex64::new(0.0, 0.0);
                let mut power = Complex64::new(1.0, 0.0);
                for used in 0..=degree {
                    total += go(rest, degree - used, acc * power);
                    power *= first;
                }
                total
            }
        }
    }
    go(vars, degree, Complex64::new(1.0, 0.0))
}

/// `h_d(|λ₀|, …, |λₙ|)`: an upper bound on the size of every term in `h_d(λ)`.
pub fn homogeneous_scale(vars: &[Complex64], degree: usize) -> f64 {
    let abs: Vec<Complex64> = vars.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
    expfun::frequencies::complete_homogeneous(&abs, degree)[degree].re
}

/// Coefficients `c₀, …, c_{n+1}` of `∏ (t − λⱼ)`.
pub fn characteristic_coeffs(vars: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &lambda in vars {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= lambda * ci;
        }
        c = next;
    }
    c
}
