//! Sign verification for derivatives of `Φ_Λ` and the inequalities built on
//! the hypothesis `Φ^{(n+1)} ≥ 0`: the convolution identity for
//! `Σ aₖ bₖ(x)`, polynomial dominance, positive definiteness of the Hankel
//! matrices of the basis, Turán-type bounds, and monotonicity certificates.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frequencies::{FrequencyVector, DEFAULT_MATCH_TOL};
use crate::fundamental::{factorial, FundamentalEvaluator};
use crate::linalg::{cholesky, Cholesky, SymMatrix};
use crate::polynomial::PolynomialCoeffs;
use crate::quadrature::integrate;

pub const DEFAULT_GRID: usize = 4096;
pub const MIN_GRID: usize = 64;
pub const BISECTION_TOL: f64 = 1e-10;
pub const IDENTITY_QUAD_ABS_TOL: f64 = 1e-11;
const IDENTITY_QUAD_REL_TOL: f64 = 1e-13;
pub const TURAN_GUARD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignStatus {
    Nonnegative,
    Violated,
}

/// Result of a sampled sign scan. `Nonnegative` is a sampling certificate,
/// not a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct SignReport {
    pub status: SignStatus,
    /// First sample with value below `−tol`.
    pub witness: Option<f64>,
    pub witness_value: Option<f64>,
    /// Sign change nearest the witness, refined by bisection.
    pub boundary: Option<f64>,
    pub samples: usize,
}

impl SignReport {
    pub fn is_nonnegative(&self) -> bool {
        self.status == SignStatus::Nonnegative
    }
}

/// `grid` equally spaced points covering `[lo, hi]`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, grid: usize) -> Vec<f64> {
    if grid == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (grid - 1) as f64;
    (0..grid).map(|i| if i + 1 == grid { hi } else { lo + step * i as f64 }).collect()
}

/// Evaluates `f` at every point in parallel; the lowest-index error wins.
pub fn sample<F>(points: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    points.par_iter().map(|&x| f(x)).collect::<Vec<_>>().into_iter().collect()
}

/// Bisects on the predicate `f(x) < 0`, which must differ at `a` and `b`,
/// until the bracket is narrower than `tol`. Returns the bracket midpoint.
pub fn bisect_sign_change<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let a_negative = f(a)? < 0.0;
    if (f(b)? < 0.0) == a_negative {
        return Err(Error::InvalidArgument(format!("no sign change bracketed by [{a}, {b}]")));
    }
    while (b - a).abs() > tol {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        if (f(mid)? < 0.0) == a_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Indices `c` where the sign predicate `v < 0` differs between samples `c`
/// and `c + 1`.
pub fn sign_change_indices(values: &[f64]) -> Vec<usize> {
    values.windows(2).enumerate().filter(|(_, w)| (w[0] < 0.0) != (w[1] < 0.0)).map(|(i, _)| i).collect()
}

/// Samples `Φ^{(m)}` on a uniform grid over `[lo, hi]`. A sample below
/// `−tol` makes the status `Violated`; the sign change nearest the first
/// such sample is then localised by bisection.
pub fn verify_sign(
    e: &FundamentalEvaluator,
    m: usize,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: f64,
) -> Result<SignReport> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
    }
    if grid < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid {grid} below minimum {MIN_GRID}")));
    }
    let points = uniform_grid(lo, hi, grid);
    let values = sample(&points, |x| e.eval_derivative(m, x))?;
    let Some(first) = values.iter().position(|&v| v < -tol) else {
        return Ok(SignReport {
            status: SignStatus::Nonnegative,
            witness: None,
            witness_value: None,
            boundary: None,
            samples: grid,
        });
    };

    let changes = sign_change_indices(&values);
    let bracket = changes
        .iter()
        .rev()
        .find(|&&c| c < first)
        .or_else(|| changes.iter().find(|&&c| c >= first))
        .copied();
    let boundary = match bracket {
        Some(c) => Some(bisect_sign_change(|x| e.eval_derivative(m, x), points[c], points[c + 1], BISECTION_TOL)?),
        None => None,
    };
    Ok(SignReport {
        status: SignStatus::Violated,
        witness: Some(points[first]),
        witness_value: Some(values[first]),
        boundary,
        samples: grid,
    })
}

fn check_degree(e: &FundamentalEvaluator, r: &PolynomialCoeffs) -> Result<()> {
    let n = e.n();
    if r.degree() > n {
        return Err(Error::DegreeTooHigh { degree: r.degree(), n });
    }
    Ok(())
}

/// `Σ aₖ bₖ(x)` for the coefficients of `R`.
pub fn basis_combination(e: &FundamentalEvaluator, r: &PolynomialCoeffs, x: f64) -> Result<f64> {
    check_degree(e, r)?;
    let b = e.basis_all(x)?;
    Ok(r.coeffs().iter().zip(&b).map(|(a, b)| a * b).sum())
}

/// `|Σ aₖ k! Φ^{(n−k)}(x) − R(x) − ∫₀ˣ R(t) Φ^{(n+1)}(x−t) dt|`, with the
/// integral oriented (negated for `x < 0`) and computed adaptively.
pub fn identity_residual(e: &FundamentalEvaluator, r: &PolynomialCoeffs, x: f64) -> Result<f64> {
    let lhs = basis_combination(e, r, x)?;
    let n = e.n();
    let integral = integrate(
        |t| Ok::<f64, Error>(r.eval(t) * e.eval_derivative(n + 1, x - t)?),
        0.0,
        x,
        IDENTITY_QUAD_ABS_TOL,
        IDENTITY_QUAD_REL_TOL,
    )?;
    Ok((lhs - r.eval(x) - integral.value).abs())
}

/// `Σ aₖ bₖ(x) − R(x)`.
pub fn dominance_gap(e: &FundamentalEvaluator, r: &PolynomialCoeffs, x: f64) -> Result<f64> {
    Ok(basis_combination(e, r, x)? - r.eval(x))
}

/// `(k+1)×(k+1)` matrix with entry `(r,s) = (r+s)!·Φ^{(top−(r+s))}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    pub k: usize,
    /// Derivative order of the `(0,0)` entry; `n` for the standard matrix.
    pub top: usize,
    pub x: f64,
    pub matrix: SymMatrix,
}

impl HankelMatrix {
    pub fn dim(&self) -> usize {
        self.k + 1
    }

    pub fn entry(&self, r: usize, s: usize) -> f64 {
        self.matrix.get(r, s)
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn quadratic_form(&self, p: &[f64]) -> f64 {
        self.matrix.quadratic_form(p)
    }
}

/// `H_{n,k}(x)`; requires `2k ≤ n`.
pub fn hankel_matrix(e: &FundamentalEvaluator, k: usize, x: f64) -> Result<HankelMatrix> {
    hankel_matrix_with_top(e, k, e.n(), x)
}

/// Hankel matrix whose `(0,0)` entry is `Φ^{(top)}(x)`; requires `2k ≤ top`.
/// With `top = n + 1` and `k = 1` this is the 2×2 matrix
/// `[[Φ″, Φ′], [Φ′, 2Φ]]` for a two-frequency vector.
pub fn hankel_matrix_with_top(e: &FundamentalEvaluator, k: usize, top: usize, x: f64) -> Result<HankelMatrix> {
    if 2 * k > top {
        return Err(Error::HankelOrder { k, twice: 2 * k, top });
    }
    let d = e.derivatives(x, top)?;
    let matrix = SymMatrix::from_fn(k + 1, |r, s| factorial(r + s) * d[top - (r + s)]);
    Ok(HankelMatrix { k, top, x, matrix })
}

/// Sign changes of `det H` over `[lo, hi]`: the determinant is sampled on a
/// uniform grid and each bracketed change is refined by bisection.
pub fn hankel_determinant_sign_changes(
    e: &FundamentalEvaluator,
    k: usize,
    top: usize,
    lo: f64,
    hi: f64,
    grid: usize,
) -> Result<Vec<f64>> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
    }
    if grid < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid {grid} below minimum {MIN_GRID}")));
    }
    let det = |x: f64| hankel_matrix_with_top(e, k, top, x).map(|h| h.determinant());
    let points = uniform_grid(lo, hi, grid);
    let values = sample(&points, det)?;
    sign_change_indices(&values)
        .into_iter()
        .map(|c| bisect_sign_change(det, points[c], points[c + 1], BISECTION_TOL))
        .collect()
}

/// Cholesky succeeds with every pivot above `tol`.
pub fn is_positive_definite(h: &HankelMatrix, tol: f64) -> bool {
    matches!(cholesky(&h.matrix, tol), Cholesky::Factor(_))
}

/// `F(x) = Φ′(x)² / (Φ″(x)·Φ(x))`.
pub fn turan_ratio(e: &FundamentalEvaluator, x: f64) -> Result<f64> {
    let d = e.derivatives(x, 2)?;
    let numerator = d[1] * d[1];
    let denominator = d[2] * d[0];
    if denominator == 0.0 || denominator.abs() <= TURAN_GUARD * numerator.abs() {
        return Err(Error::NearZeroDenominator { denominator });
    }
    Ok(numerator / denominator)
}

/// Upper Turán bound `n/(n−1)`; undefined for `n < 2`.
pub fn turan_upper_bound(n: usize) -> Option<f64> {
    (n >= 2).then(|| n as f64 / (n - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CertificateTag {
    None,
    SomeNonnegative,
    PairChain,
    Symmetric,
}

impl CertificateTag {
    pub fn name(self) -> &'static str {
        match self {
            CertificateTag::None => "NONE",
            CertificateTag::SomeNonnegative => "SOME_NONNEG",
            CertificateTag::PairChain => "PAIR_CHAIN",
            CertificateTag::Symmetric => "SYMMETRIC",
        }
    }
}

/// Every frequency is negative and `n ≥ 1`: `Φ` vanishes at 0, decays at
/// infinity and is positive in between, so `Φ′` has a zero on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterCertificate {
    pub max_frequency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityCertificate {
    /// Strongest applicable tag.
    pub tag: CertificateTag,
    /// Disjoint index pairs with `λⱼ + λₖ ≥ 0`, in the order they were removed.
    pub pairs: Vec<(usize, usize)>,
    /// Index of a non-negative frequency when that alone gives `Φ′ > 0`.
    pub nonnegative_index: Option<usize>,
    pub counter: Option<CounterCertificate>,
}

impl MonotonicityCertificate {
    /// Highest derivative order `K` such that `Φ^{(1)}, …, Φ^{(K)}` are
    /// certified on `(0, ∞)`; `None` means every order (symmetric case).
    pub fn certified_orders(&self) -> Option<usize> {
        match self.tag {
            CertificateTag::Symmetric => None,
            CertificateTag::PairChain => Some(2 * self.pairs.len()),
            CertificateTag::SomeNonnegative => Some(1),
            CertificateTag::None => Some(0),
        }
    }

    pub fn chain_length(&self) -> usize {
        self.pairs.len()
    }
}

/// Greedy disjoint pairing: repeatedly take the largest remaining frequency
/// and pair it with the smallest remaining one whose sum with it is `≥ 0`.
fn greedy_pairs(values: &[f64]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut remaining = order;
    let mut pairs = Vec::new();
    while remaining.len() >= 2 {
        let top = remaining[0];
        // `remaining` is sorted descending, so scan from the end for the
        // smallest admissible partner.
        let partner = remaining[1..].iter().rev().position(|&j| values[top] + values[j] >= 0.0);
        let Some(offset) = partner else { break };
        let idx = remaining.len() - 1 - offset;
        let j = remaining.remove(idx);
        remaining.remove(0);
        pairs.push((top, j));
    }
    pairs
}

/// Monotonicity certificate for real frequencies: symmetric vectors give
/// non-negative derivatives of every order on `[0, ∞)`; `r` disjoint pairs
/// with non-negative sums give `Φ′, …, Φ^{(2r)} > 0` on `(0, ∞)`; a single
/// non-negative frequency gives `Φ′ > 0`; all-negative frequencies give a
/// counter-certificate.
pub fn monotonicity_certificate(freq: &FrequencyVector) -> Result<MonotonicityCertificate> {
    let values = freq.real_entries()?;
    let n = freq.n();
    let pairs = greedy_pairs(&values);
    let max_index = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])).expect("non-empty");
    let max_value = values[max_index];
    let nonnegative_index = if (n >= 1 && max_value >= 0.0) || max_value > 0.0 { Some(max_index) } else { None };
    let counter = (n >= 1 && max_value < 0.0).then_some(CounterCertificate { max_frequency: max_value });

    let tag = if freq.is_symmetric(DEFAULT_MATCH_TOL) {
        CertificateTag::Symmetric
    } else if !pairs.is_empty() {
        CertificateTag::PairChain
    } else if nonnegative_index.is_some() {
        CertificateTag::SomeNonnegative
    } else {
        CertificateTag::None
    };
    Ok(MonotonicityCertificate { tag, pairs, nonnegative_index, counter })
}

/// First point in `(0, ∞)` where `Φ′` changes sign, searched on doubling
/// intervals `[0, L]` up to `max_length`.
pub fn locate_critical_point(e: &FundamentalEvaluator, max_length: f64, grid: usize) -> Result<Option<f64>> {
    let mut length = 1.0;
    while length <= max_length {
        let report = verify_sign(e, 1, 0.0, length, grid, 0.0)?;
        if !report.is_nonnegative() {
            return Ok(report.boundary);
        }
        length *= 2.0;
    }
    Ok(None)
}
