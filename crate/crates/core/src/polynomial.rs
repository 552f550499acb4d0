use crate::error::{Error, Result};

/// Number of Chebyshev points used when sampling for non-negativity.
pub const NONNEG_SAMPLES: usize = 1024;

/// Real polynomial `a₀ + a₁x + … + a_d x^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoeffs {
    coeffs: Vec<f64>,
}

impl PolynomialCoeffs {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("polynomial coefficients must be finite".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Index of the highest non-zero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self { coeffs: self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect() }
    }

    /// `(p₀ + p₁x + … + p_k x^k)²` as coefficients.
    pub fn square_of(p: &[f64]) -> Self {
        if p.is_empty() {
            return Self { coeffs: Vec::new() };
        }
        let mut coeffs = vec![0.0; 2 * p.len() - 1];
        for (r, pr) in p.iter().enumerate() {
            for (s, ps) in p.iter().enumerate() {
                coeffs[r + s] += pr * ps;
            }
        }
        Self { coeffs }
    }

    /// Sampled check that `R ≥ −tol` on `[lo, hi]`: Chebyshev points, the
    /// endpoints, and the critical points bracketed by sign changes of `R′`.
    pub fn is_nonnegative_on(&self, lo: f64, hi: f64, tol: f64) -> bool {
        self.min_on(lo, hi) >= -tol
    }

    /// Sampled minimum of `R` on `[lo, hi]`.
    pub fn min_on(&self, lo: f64, hi: f64) -> f64 {
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut points: Vec<f64> = (0..NONNEG_SAMPLES)
            .map(|j| {
                let theta = std::f64::consts::PI * (2 * j + 1) as f64 / (2 * NONNEG_SAMPLES) as f64;
                center - half * theta.cos()
            })
            .collect();
        points.insert(0, lo);
        points.push(hi);

        let dr = self.derivative();
        let mut min = points.iter().map(|&x| self.eval(x)).fold(f64::INFINITY, f64::min);
        for w in points.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let (fa, fb) = (dr.eval(a), dr.eval(b));
            if fa == 0.0 || fb == 0.0 || (fa < 0.0) == (fb < 0.0) {
                continue;
            }
            let a_negative = fa < 0.0;
            for _ in 0..100 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if (dr.eval(mid) < 0.0) == a_negative {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            min = min.min(self.eval(0.5 * (a + b)));
        }
        min
    }
}
