//! Matrix exponential of upper-bidiagonal complex matrices.
//!
//! Scaling and squaring with the diagonal Padé(13) approximant. All products
//! and the final solve exploit upper-triangular structure, so structural
//! zeros stay exact. During squaring the diagonal and first superdiagonal
//! are overwritten with their exactly computed values.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scaled-norm threshold for Padé(13) at double precision.
const THETA_13: f64 = 5.371_920_351_148_152;

const MAX_SQUARINGS: u32 = 60;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Dense row-major square matrix, upper triangular by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperTriangular {
    dim: usize,
    data: Vec<Complex64>,
}

impl UpperTriangular {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Bidiagonal matrix with `diag` on the diagonal and `sup` on the
    /// first superdiagonal.
    pub fn bidiagonal(diag: &[Complex64], sup: Complex64) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
            if i + 1 < dim {
                m[(i, i + 1)] = sup;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in i..=j {
                    acc += self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `Σ cᵢ·Mᵢ` over the given terms.
    fn combine(dim: usize, terms: &[(f64, &Self)]) -> Self {
        let mut out = Self::zeros(dim);
        for (coef, m) in terms {
            for (o, v) in out.data.iter_mut().zip(&m.data) {
                *o += v * *coef;
            }
        }
        out
    }

    fn add_identity(&mut self, coef: f64) {
        for i in 0..self.dim {
            self[(i, i)] += coef;
        }
    }

    /// Solves `self · X = rhs` by back substitution.
    fn solve(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut x = Self::zeros(n);
        for j in 0..n {
            for i in (0..=j).rev() {
                let mut acc = rhs[(i, j)];
                for k in (i + 1)..=j {
                    acc -= self[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = acc / self[(i, i)];
            }
        }
        x
    }
}

impl std::ops::Index<(usize, usize)> for UpperTriangular {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for UpperTriangular {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// `(eᶻ − 1)/z`, accurate near zero.
pub fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1.0 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..40 {
            term = term * z / k as f64;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Divided difference of `λ ↦ e^{τλ}` at the nodes `a`, `b`.
fn exp_divided_difference(tau: f64, a: Complex64, b: Complex64) -> Complex64 {
    (a * tau).exp() * tau * phi1((b - a) * tau)
}

/// Number of squarings chosen from the spectral-norm bound
/// `‖A‖₂ ≤ √(‖A‖₁‖A‖∞)` of `A = τ·Z` with `Z` bidiagonal (superdiagonal 1).
pub fn squaring_count(diag: &[Complex64], tau: f64) -> Result<u32> {
    let n = diag.len();
    let mut norm_1: f64 = 0.0;
    let mut norm_inf: f64 = 0.0;
    for (j, d) in diag.iter().enumerate() {
        let m = d.norm();
        norm_1 = norm_1.max(m + if j > 0 { 1.0 } else { 0.0 });
        norm_inf = norm_inf.max(m + if j + 1 < n { 1.0 } else { 0.0 });
    }
    let bound = tau.abs() * (norm_1 * norm_inf).sqrt();
    if bound <= THETA_13 {
        return Ok(0);
    }
    let s = (bound / THETA_13).log2().ceil();
    if !s.is_finite() || s > MAX_SQUARINGS as f64 {
        return Err(Error::Overflow { exponent: if s.is_finite() { s as u32 } else { u32::MAX } });
    }
    Ok(s as u32)
}

/// `exp(τ·Z)` for the bidiagonal `Z` with diagonal `diag` and unit
/// superdiagonal.
pub fn expm_bidiagonal(diag: &[Complex64], tau: f64) -> Result<UpperTriangular> {
    let n = diag.len();
    let s = squaring_count(diag, tau)?;
    let scaled_tau = tau / f64::powi(2.0, s as i32);
    let a = UpperTriangular::bidiagonal(
        &diag.iter().map(|d| d * scaled_tau).collect::<Vec<_>>(),
        Complex64::new(scaled_tau, 0.0),
    );

    let a2 = a.mul(&a);
    let a4 = a2.mul(&a2);
    let a6 = a2.mul(&a4);
    let b = &PADE_13;

    let inner_u = UpperTriangular::combine(n, &[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let mut w = a6.mul(&inner_u);
    w = UpperTriangular::combine(n, &[(1.0, &w), (b[7], &a6), (b[5], &a4), (b[3], &a2)]);
    w.add_identity(b[1]);
    let u = a.mul(&w);

    let inner_v = UpperTriangular::combine(n, &[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let mut v = a6.mul(&inner_v);
    v = UpperTriangular::combine(n, &[(1.0, &v), (b[6], &a6), (b[4], &a4), (b[2], &a2)]);
    v.add_identity(b[0]);

    let numer = UpperTriangular::combine(n, &[(1.0, &v), (1.0, &u)]);
    let denom = UpperTriangular::combine(n, &[(1.0, &v), (-1.0, &u)]);
    let mut result = denom.solve(&numer);

    let mut step_tau = scaled_tau;
    restore_bands(&mut result, diag, step_tau);
    for _ in 0..s {
        result = result.mul(&result);
        step_tau *= 2.0;
        restore_bands(&mut result, diag, step_tau);
    }
    Ok(result)
}

fn restore_bands(m: &mut UpperTriangular, diag: &[Complex64], tau: f64) {
    let n = diag.len();
    for i in 0..n {
        m[(i, i)] = (diag[i] * tau).exp();
        if i + 1 < n {
            m[(i, i + 1)] = exp_divided_difference(tau, diag[i], diag[i + 1]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_argument_is_identity() {
        let e = expm_bidiagonal(&[c(1.0), c(-2.0), c(3.0)], 0.0).unwrap();
        assert_eq!(e, UpperTriangular::identity(3));
    }

    #[test]
    fn nilpotent_block_gives_taylor_polynomial() {
        // exp(tN) for the 4x4 shift N has entries t^(j-i)/(j-i)!.
        let t = 7.5;
        let e = expm_bidiagonal(&[c(0.0); 4], t).unwrap();
        let mut fact = 1.0;
        for d in 0..4 {
            if d > 0 {
                fact *= d as f64;
            }
            let expected = t.powi(d as i32) / fact;
            for i in 0..(4 - d) {
                let got = e[(i, i + d)];
                assert!((got.re - expected).abs() <= 1e-13 * expected, "d={d}: {got} vs {expected}");
                assert_eq!(got.im, 0.0);
            }
        }
    }

    #[test]
    fn two_by_two_matches_divided_difference() {
        let (a, b) = (c(-1.0), c(-2.0));
        for &t in &[0.3, 1.0, 4.0, 25.0, -3.0] {
            let e = expm_bidiagonal(&[a, b], t).unwrap();
            let expected = ((a * t).exp() - (b * t).exp()) / (a - b);
            assert!((e[(0, 1)] - expected).norm() <= 1e-14 * (1.0 + expected.norm()));
        }
    }

    #[test]
    fn phi1_is_continuous_across_branch() {
        let below = phi1(Complex64::new(0.999_999_999, 0.0));
        let above = phi1(Complex64::new(1.000_000_001, 0.0));
        assert!((below - above).norm() < 1e-8);
        assert!((phi1(c(1e-20)) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(squaring_count(&[c(1e10)], 1e10), Err(Error::Overflow { .. })));
        assert_eq!(squaring_count(&[c(1.0)], 1.0).unwrap(), 0);
    }
}
