//! Evaluation of the fundamental function `Φ_Λ` and its derivatives.
//!
//! `Φ_Λ` is the solution of `L f = 0` with `f(0) = … = f^{(n−1)}(0) = 0` and
//! `f^{(n)}(0) = 1`. It is the divided difference of `λ ↦ e^{xλ}` over the
//! frequencies, so `Φ^{(m)}(x)` is the top-right entry of `Zᵐ·exp(xZ)` where
//! `Z` is upper bidiagonal with the frequencies on the diagonal and ones
//! above it. This handles repeated frequencies without case analysis.
//!
//! Two independent evaluators are kept alongside for cross-checking:
//! partial fractions (distinct frequencies only) and the Taylor series at 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm::{expm_bidiagonal, UpperTriangular};
use crate::frequencies::{complete_homogeneous, FrequencyVector, DEFAULT_MATCH_TOL};

/// Imaginary residue allowed before a value is projected to the reals,
/// relative to `1 + |value|`.
pub const REAL_PROJECTION_TOL: f64 = 1e-9;

/// Minimum pairwise gap accepted by [`eval_via_partial_fractions`].
pub const PARTIAL_FRACTION_MIN_GAP: f64 = 1e-6;

/// Relative tail bound the Taylor evaluator must reach.
pub const TAYLOR_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct FundamentalEvaluator {
    freq: FrequencyVector,
    opitz: UpperTriangular,
    realify: bool,
}

impl FundamentalEvaluator {
    pub fn new(freq: FrequencyVector) -> Self {
        let opitz = UpperTriangular::bidiagonal(freq.entries(), Complex64::new(1.0, 0.0));
        let realify = freq.is_conjugate_closed(DEFAULT_MATCH_TOL);
        Self { freq, opitz, realify }
    }

    pub fn freq(&self) -> &FrequencyVector {
        &self.freq
    }

    pub fn n(&self) -> usize {
        self.freq.n()
    }

    /// The bidiagonal matrix `Z` whose functions give divided differences.
    pub fn opitz(&self) -> &UpperTriangular {
        &self.opitz
    }

    /// Whether the frequencies are closed under conjugation, i.e. `Φ` is real.
    pub fn realify(&self) -> bool {
        self.realify
    }

    /// `Φ^{(0)}(x), …, Φ^{(max_order)}(x)` from a single exponential.
    pub fn derivatives_complex(&self, x: f64, max_order: usize) -> Result<Vec<Complex64>> {
        let n = self.n();
        let mut column = expm_bidiagonal(self.freq.entries(), x)?.column(n);
        let lambdas = self.freq.entries();
        let mut out = Vec::with_capacity(max_order + 1);
        out.push(column[0]);
        for _ in 0..max_order {
            // column <- Z * column
            for i in 0..=n {
                let next = if i < n { column[i + 1] } else { Complex64::new(0.0, 0.0) };
                column[i] = lambdas[i] * column[i] + next;
            }
            out.push(column[0]);
        }
        Ok(out)
    }

    pub fn derivatives(&self, x: f64, max_order: usize) -> Result<Vec<f64>> {
        self.derivatives_complex(x, max_order)?.into_iter().map(project_real).collect()
    }

    pub fn eval_derivative_complex(&self, m: usize, x: f64) -> Result<Complex64> {
        Ok(self.derivatives_complex(x, m)?[m])
    }

    /// `Φ^{(m)}(x)`, projected to the reals after checking the imaginary residue.
    pub fn eval_derivative(&self, m: usize, x: f64) -> Result<f64> {
        project_real(self.eval_derivative_complex(m, x)?)
    }

    /// `b_k(x) = k!·Φ^{(n−k)}(x)`.
    pub fn basis(&self, k: usize, x: f64) -> Result<f64> {
        let n = self.n();
        if k > n {
            return Err(Error::IndexOutOfRange { index: k, max: n });
        }
        Ok(factorial(k) * self.eval_derivative(n - k, x)?)
    }

    /// `b_0(x), …, b_n(x)`.
    pub fn basis_all(&self, x: f64) -> Result<Vec<f64>> {
        let n = self.n();
        let d = self.derivatives(x, n)?;
        Ok((0..=n).map(|k| factorial(k) * d[n - k]).collect())
    }
}

pub fn build_evaluator(freq: FrequencyVector) -> FundamentalEvaluator {
    FundamentalEvaluator::new(freq)
}

fn project_real(z: Complex64) -> Result<f64> {
    if z.im.abs() > REAL_PROJECTION_TOL * (1.0 + z.re.abs()) {
        return Err(Error::NonRealResult { value: z.re, imag: z.im });
    }
    Ok(z.re)
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `Σⱼ λⱼᵐ e^{λⱼx} / ∏_{k≠j}(λⱼ − λₖ)`; requires pairwise distinct frequencies.
pub fn eval_via_partial_fractions(freq: &FrequencyVector, m: usize, x: f64) -> Result<Complex64> {
    let lambdas = freq.entries();
    for i in 0..lambdas.len() {
        for j in (i + 1)..lambdas.len() {
            if (lambdas[i] - lambdas[j]).norm() <= PARTIAL_FRACTION_MIN_GAP {
                return Err(Error::ConfluentFrequencies { i, j, min_gap: PARTIAL_FRACTION_MIN_GAP });
            }
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, &lj) in lambdas.iter().enumerate() {
        let denom: Complex64 = lambdas
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, &lk)| lj - lk)
            .product();
        sum += lj.powu(m as u32) * (lj * x).exp() / denom;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorEvaluation {
    pub value: Complex64,
    /// Geometric upper estimate of the neglected tail.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Truncated Taylor series `Σ_{k ≥ max(m,n)} Φ^{(k)}(0) x^{k−m}/(k−m)!`.
///
/// The tail is bounded using `|Φ^{(k)}(0)| ≤ C(k,n)·ρ^{k−n}` with
/// `ρ = max|λⱼ|`, whose successive ratios decrease once `k ≥ max(m,n)`.
pub fn eval_via_taylor(freq: &FrequencyVector, m: usize, x: f64, terms: usize) -> Result<TaylorEvaluation> {
    if terms == 0 {
        return Err(Error::InvalidArgument("Taylor evaluation needs at least one term".into()));
    }
    let n = freq.n();
    let first = m.max(n);
    let last = first + terms - 1;
    let h = complete_homogeneous(freq.entries(), last - n);

    let mut value = Complex64::new(0.0, 0.0);
    for k in first..=last {
        let power = (k - m) as i32;
        let scale = x.powi(power) / factorial(k - m);
        value += h[k - n] * scale;
    }

    let rho = freq.max_modulus();
    let next = last + 1;
    let tail_bound = if rho == 0.0 || x == 0.0 {
        0.0
    } else {
        let ln_binom = ln_factorial(next) - ln_factorial(n) - ln_factorial(next - n);
        let ln_term = ln_binom
            + (next - n) as f64 * rho.ln()
            + (next - m) as f64 * x.abs().ln()
            - ln_factorial(next - m);
        let ratio = (next + 1) as f64 / (next + 1 - n) as f64 * rho * x.abs() / (next + 1 - m) as f64;
        if ratio < 1.0 {
            ln_term.exp() / (1.0 - ratio)
        } else {
            f64::INFINITY
        }
    };

    if tail_bound > TAYLOR_TAIL_TOL * value.norm() {
        return Err(Error::TaylorNotConverged { terms, tail: tail_bound });
    }
    Ok(TaylorEvaluation { value, tail_bound, terms })
}
