//! Frequency vectors `(λ₀, …, λₙ)` and their structural predicates.
//!
//! A frequency vector lists the roots (with multiplicity) of the
//! characteristic polynomial of `L = ∏ (d/dx − λⱼ)`. The order index `n` is
//! one less than the number of entries, so `L` has order `n + 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for multiset comparisons.
pub const DEFAULT_MATCH_TOL: f64 = 1e-9;

/// Imaginary parts of the frequency sum above this are treated as non-real.
pub const NECESSARY_IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector {
    entries: Vec<Complex64>,
}

impl FrequencyVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyFrequencies);
        }
        if let Some(index) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteFrequency { index });
        }
        Ok(Self { entries })
    }

    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Order index: the number of entries minus one.
    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.entries.iter().sum()
    }

    /// Returns the real parts if every entry is real (imaginary part exactly 0).
    pub fn real_entries(&self) -> Result<Vec<f64>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(index, z)| {
                if z.im == 0.0 {
                    Ok(z.re)
                } else {
                    Err(Error::ComplexFrequency { index, imag: z.im })
                }
            })
            .collect()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// True iff the multiset of entries equals the multiset of their
    /// conjugates, up to `tol` per matched pair.
    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        multiset_matches(&self.entries, |z| z.conj(), tol)
    }

    /// True iff the multiset of entries equals the multiset of their
    /// negatives, up to `tol` per matched pair.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        multiset_matches(&self.entries, |z| -z, tol)
    }

    /// `Φ^{(k)}(0)`: zero below `n`, one at `n`, and the complete homogeneous
    /// symmetric polynomial `h_{k−n}(λ₀, …, λₙ)` above.
    pub fn taylor_coefficient(&self, k: usize) -> Complex64 {
        let n = self.n();
        if k < n {
            return Complex64::new(0.0, 0.0);
        }
        complete_homogeneous(&self.entries, k - n)[k - n]
    }

    /// Necessary condition for `Φ^{(n+1)} ≥ 0` on `[0, ∞)`: `Σ λⱼ ≥ 0`.
    pub fn check_necessary(&self) -> Result<bool> {
        let sum = self.sum();
        if sum.im.abs() > NECESSARY_IMAG_TOL {
            return Err(Error::NonRealFrequencySum { imag: sum.im });
        }
        Ok(sum.re >= 0.0)
    }
}

/// `h_0, …, h_degree` of the given variables, built one variable at a time
/// with `h_d ← h_d + λ·h_{d−1}`.
pub fn complete_homogeneous(vars: &[Complex64], degree: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); degree + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for &lambda in vars {
        for d in 1..=degree {
            let prev = h[d - 1];
            h[d] += lambda * prev;
        }
    }
    h
}

/// Greedy nearest-neighbour matching of `map(λⱼ)` against the entries.
fn multiset_matches(entries: &[Complex64], map: impl Fn(Complex64) -> Complex64, tol: f64) -> bool {
    let mut used = vec![false; entries.len()];
    for &z in entries {
        let target = map(z);
        let best = entries
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, w)| (i, (w - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, dist)) if dist <= tol => used[i] = true,
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert_eq!(FrequencyVector::new(vec![]), Err(Error::EmptyFrequencies));
        assert_eq!(
            FrequencyVector::from_reals(&[1.0, f64::NAN]),
            Err(Error::NonFiniteFrequency { index: 1 })
        );
    }

    #[test]
    fn conjugate_closure() {
        let real = FrequencyVector::from_reals(&[-1.0, -2.0]).unwrap();
        assert!(real.is_conjugate_closed(0.0));
        let pair = FrequencyVector::new(vec![c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
        assert!(pair.is_conjugate_closed(0.0));
        let lone = FrequencyVector::new(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        assert!(!lone.is_conjugate_closed(1e-12));
    }

    #[test]
    fn symmetry() {
        let ex9 = FrequencyVector::from_reals(&[-1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(!ex9.is_symmetric(DEFAULT_MATCH_TOL));
        assert!(FrequencyVector::from_reals(&[-1.0, 0.0, 1.0]).unwrap().is_symmetric(0.0));
        assert!(FrequencyVector::from_reals(&[0.0, 0.0, 0.0]).unwrap().is_symmetric(0.0));
    }

    #[test]
    fn symmetry_and_conjugation_are_independent() {
        // {i, i} is not closed under conjugation nor negation.
        let v = FrequencyVector::new(vec![c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!(!v.is_symmetric(0.0));
        assert!(!v.is_conjugate_closed(0.0));
        // {1+i, -1-i} is symmetric but not conjugate-closed.
        let v = FrequencyVector::new(vec![c(1.0, 1.0), c(-1.0, -1.0)]).unwrap();
        assert!(v.is_symmetric(0.0));
        assert!(!v.is_conjugate_closed(0.0));
        // {1, 2} is conjugate-closed but not symmetric.
        let v = FrequencyVector::from_reals(&[1.0, 2.0]).unwrap();
        assert!(!v.is_symmetric(0.0));
        assert!(v.is_conjugate_closed(0.0));
    }

    #[test]
    fn taylor_low_orders() {
        let v = FrequencyVector::from_reals(&[0.3, -1.2, 2.5, 0.7]).unwrap();
        assert_eq!(v.taylor_coefficient(0), c(0.0, 0.0));
        assert_eq!(v.taylor_coefficient(2), c(0.0, 0.0));
        assert_eq!(v.taylor_coefficient(3), c(1.0, 0.0));
        assert!((v.taylor_coefficient(4) - v.sum()).norm() < 1e-15);
        let v = FrequencyVector::from_reals(&[1.0, 2.0]).unwrap();
        assert_eq!(v.taylor_coefficient(3), c(7.0, 0.0));
    }

    #[test]
    fn necessary_condition() {
        assert!(!FrequencyVector::from_reals(&[-1.0, -2.0]).unwrap().check_necessary().unwrap());
        assert!(FrequencyVector::from_reals(&[-1.0, 0.0, 1.0]).unwrap().check_necessary().unwrap());
        assert!(FrequencyVector::from_reals(&[-1.0, 1.0, 0.0, 1.0])
            .unwrap()
            .check_necessary()
            .unwrap());
        let v = FrequencyVector::new(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(v.check_necessary(), Err(Error::NonRealFrequencySum { .. })));
    }
}
