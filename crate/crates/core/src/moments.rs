//! Moment transform `μ ↦ sₖ = ∫ bₖ(x − a) dμ(x)`, truncated Hausdorff
//! checks on `[0, b − a]`, and recovery of an atomic representing measure.
//!
//! Recovery follows the orthogonal-polynomial route: a Cholesky factor of
//! the Hankel matrix `(s_{i+j})` yields the three-term recurrence, and the
//! eigen-decomposition of the resulting Jacobi matrix gives atoms and
//! weights. For odd `n` the Gauss rule matches all of `s₀, …, sₙ`; for even
//! `n` a Radau rule with a fixed atom at the left endpoint supplies the
//! extra moment.

use std::fmt;
use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::fundamental::FundamentalEvaluator;
use crate::inequalities::{verify_sign, DEFAULT_GRID};
use crate::linalg::{tridiagonal_eigen, SymMatrix};
use crate::polynomial::PolynomialCoeffs;
use crate::quadrature::gauss_legendre;

pub const DEFAULT_HAUSDORFF_TOL: f64 = 1e-10;
pub const DEFAULT_PIVOT_TOL: f64 = 1e-12;
/// Moment-match and support tolerance for recovered measures.
pub const RECOVERY_TOL: f64 = 1e-8;
const HYPOTHESIS_TOL: f64 = 1e-12;
const DENSITY_START_ORDER: usize = 64;
const DENSITY_MAX_ORDER: usize = 4096;
const DENSITY_STABILITY: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Non-negative density on the support of a measure.
#[derive(Clone)]
pub struct Density {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Density {
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), f: Arc::new(f) }
    }

    /// Probability density `1/(b − a)`.
    pub fn uniform(a: f64, b: f64) -> Self {
        let h = 1.0 / (b - a);
        Self::custom("uniform", move |_| h)
    }

    /// Probability density proportional to `e^{−rate·(x − a)}` on `[a, b]`.
    pub fn truncated_exponential(rate: f64, a: f64, b: f64) -> Self {
        let mass = if rate == 0.0 { b - a } else { -(-rate * (b - a)).exp_m1() / rate };
        Self::custom(format!("truncexp({rate})"), move |x| (-rate * (x - a)).exp() / mass)
    }

    /// Unnormalised polynomial density `p(x) = Σ cᵢ xⁱ`.
    pub fn polynomial(p: PolynomialCoeffs) -> Self {
        Self::custom(format!("poly({:?})", p.coeffs()), move |x| p.eval(x))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub enum Measure {
    Atoms { support: (f64, f64), atoms: Vec<Atom> },
    Density { support: (f64, f64), density: Density },
}

fn check_support(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidMeasure(format!("support [{a}, {b}] must be a finite non-empty interval")));
    }
    Ok(())
}

impl Measure {
    pub fn atoms(support: (f64, f64), atoms: Vec<Atom>) -> Result<Self> {
        let (a, b) = support;
        check_support(a, b)?;
        for atom in &atoms {
            if !(atom.weight >= 0.0 && atom.weight.is_finite()) {
                return Err(Error::InvalidMeasure(format!("atom weight {} must be non-negative", atom.weight)));
            }
            if !(atom.location >= a && atom.location <= b) {
                return Err(Error::InvalidMeasure(format!("atom at {} outside [{a}, {b}]", atom.location)));
            }
        }
        Ok(Measure::Atoms { support, atoms })
    }

    pub fn density(support: (f64, f64), density: Density) -> Result<Self> {
        check_support(support.0, support.1)?;
        Ok(Measure::Density { support, density })
    }

    pub fn unit_atom(support: (f64, f64), location: f64) -> Result<Self> {
        Self::atoms(support, vec![Atom { location, weight: 1.0 }])
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Measure::Atoms { support, .. } | Measure::Density { support, .. } => *support,
        }
    }

    pub fn atom_list(&self) -> Option<&[Atom]> {
        match self {
            Measure::Atoms { atoms, .. } => Some(atoms),
            Measure::Density { .. } => None,
        }
    }

    /// Ordinary shifted moments `∫ (x − a)ᵏ dμ` for `k = 0..=n` (atoms only).
    pub fn shifted_moments(&self, n: usize) -> Option<Vec<f64>> {
        let atoms = self.atom_list()?;
        let a = self.support().0;
        Some((0..=n).map(|k| atoms.iter().map(|at| at.weight * (at.location - a).powi(k as i32)).sum()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    pub values: Vec<f64>,
    pub support_length: f64,
    pub origin: f64,
    /// Whether `Φ^{(n+1)} ≥ 0` was certified on `[0, support_length]` when
    /// the sequence was produced by [`transform`]; `None` for raw input.
    pub hypothesis_certified: Option<bool>,
}

impl MomentSequence {
    pub fn new(values: Vec<f64>, origin: f64, support_length: f64) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("moment sequence must be non-empty and finite".into()));
        }
        if !(support_length > 0.0 && support_length.is_finite()) {
            return Err(Error::InvalidArgument(format!("support length {support_length} must be positive")));
        }
        Ok(Self { values, support_length, origin, hypothesis_certified: None })
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }
}

/// `sₖ = ∫ k!·Φ^{(n−k)}(x − a) dμ(x)` for `k = 0..=n`.
///
/// The hypothesis `Φ^{(n+1)} ≥ 0` on `[0, b − a]` is checked by sampling;
/// when it fails the computation still proceeds and the flag is recorded.
pub fn transform(e: &FundamentalEvaluator, mu: &Measure) -> Result<MomentSequence> {
    let n = e.n();
    let (a, b) = mu.support();
    let length = b - a;
    let certified = verify_sign(e, n + 1, 0.0, length, DEFAULT_GRID, HYPOTHESIS_TOL)?.is_nonnegative();
    if !certified {
        warn!("derivative of order {} is not certified non-negative on [0, {length}]", n + 1);
    }

    let values = match mu {
        Measure::Atoms { atoms, .. } => {
            let mut s = vec![0.0; n + 1];
            for atom in atoms {
                for (sk, bk) in s.iter_mut().zip(e.basis_all(atom.location - a)?) {
                    *sk += atom.weight * bk;
                }
            }
            s
        }
        Measure::Density { density, .. } => density_moments(e, density, a, b)?,
    };
    Ok(MomentSequence { values, support_length: length, origin: a, hypothesis_certified: Some(certified) })
}

fn density_moments(e: &FundamentalEvaluator, density: &Density, a: f64, b: f64) -> Result<Vec<f64>> {
    let n = e.n();
    let rule = |order: usize| -> Result<Vec<f64>> {
        let (nodes, weights) = gauss_legendre(order, a, b)?;
        let mut s = vec![0.0; n + 1];
        for (x, w) in nodes.iter().zip(&weights) {
            let rho = density.eval(*x);
            if !(rho >= 0.0) {
                return Err(Error::InvalidMeasure(format!("density {} is {rho} at {x}", density.name())));
            }
            for (sk, bk) in s.iter_mut().zip(e.basis_all(x - a)?) {
                *sk += w * rho * bk;
            }
        }
        Ok(s)
    };
    let mut order = DENSITY_START_ORDER;
    let mut previous = rule(order)?;
    let mut evaluations = order;
    while order < DENSITY_MAX_ORDER {
        order *= 2;
        let current = rule(order)?;
        evaluations += order;
        let scale = 1.0 + current.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let diff = current.iter().zip(&previous).fold(0.0_f64, |m, (c, p)| m.max((c - p).abs()));
        if diff <= DENSITY_STABILITY * scale {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::QuadratureNotConverged { error: f64::NAN, evaluations })
}

/// `Σ aₖ sₖ`: the linear functional taking `tᵏ` to `sₖ`.
pub fn riesz_functional(s: &MomentSequence, r: &PolynomialCoeffs) -> Result<f64> {
    let n = s.n();
    if r.degree() > n {
        return Err(Error::DegreeTooHigh { degree: r.degree(), n });
    }
    Ok(r.coeffs().iter().zip(&s.values).map(|(a, s)| a * s).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffCondition {
    /// Which localising polynomial the matrix represents: `1`, `t`, `b-t`,
    /// or `t(b-t)`.
    pub name: &'static str,
    pub matrix: SymMatrix,
    pub min_eigenvalue: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffReport {
    pub conditions: Vec<HausdorffCondition>,
    pub passed: bool,
}

fn psd_condition(name: &'static str, matrix: SymMatrix, tol: f64) -> HausdorffCondition {
    let eig = matrix.eigenvalues();
    let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
    let norm = eig.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let threshold = -tol * norm;
    HausdorffCondition { name, passed: min_eigenvalue >= threshold, matrix, min_eigenvalue, threshold }
}

/// Truncated Hausdorff conditions on `[0, b]`, `b` the support length.
///
/// With `m = ⌊n/2⌋`: for even `n`, `(s_{i+j})_{0..m}` and
/// `(b s_{i+j+1} − s_{i+j+2})_{0..m−1}`; for odd `n`, `(s_{i+j+1})_{0..m}`
/// and `(b s_{i+j} − s_{i+j+1})_{0..m}`, plus `(s_{i+j})_{0..m}`. Each must be
/// positive semidefinite with smallest eigenvalue `≥ −tol·‖M‖₂`.
pub fn hausdorff_check(s: &MomentSequence, tol: f64) -> HausdorffReport {
    let v = &s.values;
    let b = s.support_length;
    let n = s.n();
    let m = n / 2;
    let mut conditions = vec![psd_condition("1", SymMatrix::from_fn(m + 1, |i, j| v[i + j]), tol)];
    if n % 2 == 0 {
        if m >= 1 {
            conditions.push(psd_condition(
                "t(b-t)",
                SymMatrix::from_fn(m, |i, j| b * v[i + j + 1] - v[i + j + 2]),
                tol,
            ));
        }
    } else {
        conditions.push(psd_condition("t", SymMatrix::from_fn(m + 1, |i, j| v[i + j + 1]), tol));
        conditions.push(psd_condition("b-t", SymMatrix::from_fn(m + 1, |i, j| b * v[i + j] - v[i + j + 1]), tol));
    }
    let passed = conditions.iter().all(|c| c.passed);
    HausdorffReport { conditions, passed }
}

/// Upper Cholesky rows of the Hankel matrix `(s_{i+j})`: `r[i][j]` for
/// `j ≥ i` as far as the moments allow. Stops at the first pivot `≤ tol`.
struct HankelFactor {
    rows: Vec<Vec<f64>>,
    failed_pivot: Option<f64>,
}

fn hankel_factor(s: &[f64], max_rows: usize, tol: f64) -> HankelFactor {
    let n = s.len() - 1;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for i in 0..max_rows {
        if 2 * i > n {
            break;
        }
        let width = n - i + 1; // columns j with i + j <= n
        let mut row = vec![0.0; width.max(i + 1)];
        let pivot = s[2 * i] - (0..i).map(|k| rows[k][i].powi(2)).sum::<f64>();
        if !(pivot > tol) {
            return HankelFactor { rows, failed_pivot: Some(pivot) };
        }
        let rii = pivot.sqrt();
        row[i] = rii;
        for j in (i + 1)..width {
            let acc = s[i + j] - (0..i).map(|k| rows[k][i] * rows[k][j]).sum::<f64>();
            row[j] = acc / rii;
        }
        rows.push(row);
    }
    HankelFactor { rows, failed_pivot: None }
}

/// Jacobi matrix `(α₀..α_{q−1}, β₁..β_{q−1})` from the Cholesky rows; also
/// returns `β_q` when row `q` is available.
fn jacobi_from_factor(rows: &[Vec<f64>], q: usize) -> (Vec<f64>, Vec<f64>, Option<f64>) {
    let mut alpha = Vec::with_capacity(q);
    let mut beta = Vec::with_capacity(q.saturating_sub(1));
    for j in 0..q {
        let mut a = rows[j][j + 1] / rows[j][j];
        if j > 0 {
            a -= rows[j - 1][j] / rows[j - 1][j - 1];
            beta.push(rows[j][j] / rows[j - 1][j - 1]);
        }
        alpha.push(a);
    }
    let next = rows.get(q).map(|r| r[q] / rows[q - 1][q - 1]);
    (alpha, beta, next)
}

/// Solves the symmetric tridiagonal system `J x = rhs` (Thomas algorithm).
fn solve_tridiagonal(diag: &[f64], off: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 0..n {
        let lower = if i > 0 { off[i - 1] } else { 0.0 };
        let denom = diag[i] - lower * if i > 0 { c[i - 1] } else { 0.0 };
        c[i] = if i + 1 < n { off[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - lower * if i > 0 { d[i - 1] } else { 0.0 }) / denom;
    }
    let mut x = d;
    for i in (0..n.saturating_sub(1)).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    x
}

/// Recovers an atomic measure `ν` on `[a, a + b]` whose shifted moments
/// reproduce `s` to [`RECOVERY_TOL`]·(1 + |sₖ|).
///
/// When the Hankel matrix is only semidefinite the rule is built on its
/// largest positive definite leading block.
pub fn recover_measure(s: &MomentSequence, tol: f64) -> Result<Measure> {
    let v = &s.values;
    let n = s.n();
    let b = s.support_length;
    let m = n / 2;
    let scale = (0..=m).map(|i| v[2 * i].abs()).fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
    let factor = hankel_factor(v, m + 1, tol * scale);
    if let Some(pivot) = factor.failed_pivot {
        if pivot < -tol * scale {
            return Err(Error::IndefiniteHankel { index: factor.rows.len(), pivot });
        }
    }
    let p = factor.rows.len();

    let (locations, weights) = if p == 0 {
        (Vec::new(), Vec::new())
    } else if n % 2 == 0 && p == m + 1 {
        radau_at_origin(&factor.rows, m, v[0])?
    } else {
        let q = p.min((n + 1) / 2);
        let (alpha, beta, _) = jacobi_from_factor(&factor.rows, q);
        let (nodes, first) = tridiagonal_eigen(&alpha, &beta)?;
        (nodes, first.iter().map(|z| v[0] * z * z).collect())
    };

    let mut atoms = Vec::with_capacity(locations.len());
    for (&t, &w) in locations.iter().zip(&weights) {
        if t < -RECOVERY_TOL || t > b + RECOVERY_TOL {
            return Err(Error::AtomOutsideSupport { location: t, length: b });
        }
        atoms.push(Atom { location: s.origin + t.clamp(0.0, b), weight: w.max(0.0) });
    }
    let nu = Measure::atoms((s.origin, s.origin + b), atoms)?;
    for (index, residual) in moment_residuals(&nu, s).into_iter().enumerate() {
        if residual > RECOVERY_TOL * (1.0 + v[index].abs()) {
            return Err(Error::MomentMismatch { index, residual });
        }
    }
    Ok(nu)
}

/// `m + 1` atoms, one fixed at 0, matching `s₀, …, s_{2m}`.
fn radau_at_origin(rows: &[Vec<f64>], m: usize, s0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Ok((vec![0.0], vec![s0]));
    }
    let (mut alpha, mut beta, next) = jacobi_from_factor(rows, m);
    let beta_m = next.expect("row m present when the full Hankel block is definite");
    // α_m is chosen so that 0 is an eigenvalue of the extended Jacobi matrix.
    let mut rhs = vec![0.0; m];
    rhs[m - 1] = beta_m * beta_m;
    let delta = solve_tridiagonal(&alpha, &beta, &rhs);
    alpha.push(delta[m - 1]);
    beta.push(beta_m);
    let (nodes, first) = tridiagonal_eigen(&alpha, &beta)?;
    Ok((nodes, first.iter().map(|z| s0 * z * z).collect()))
}

/// `|∫ (x − a)ᵏ dν − sₖ|` for each `k`; infinite for non-atomic `ν`.
pub fn moment_residuals(nu: &Measure, s: &MomentSequence) -> Vec<f64> {
    match nu.atom_list() {
        Some(atoms) => (0..=s.n())
            .map(|k| {
                let mk: f64 = atoms.iter().map(|at| at.weight * (at.location - s.origin).powi(k as i32)).sum();
                (mk - s.values[k]).abs()
            })
            .collect(),
        None => vec![f64::INFINITY; s.n() + 1],
    }
}

/// Scans unit atoms at `grid` points of `[a, b]` and returns the first
/// location whose transformed sequence fails [`hausdorff_check`].
pub fn search_violating_atom(e: &FundamentalEvaluator, a: f64, b: f64, grid: usize, tol: f64) -> Result<Option<f64>> {
    for x in crate::inequalities::uniform_grid(a, b, grid) {
        let mu = Measure::unit_atom((a, b), x)?;
        let s = transform(e, &mu)?;
        if !hausdorff_check(&s, tol).passed {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
