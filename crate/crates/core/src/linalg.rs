//! Small dense linear algebra: Cholesky with a pivot threshold, a symmetric
//! tridiagonal eigensolver that tracks only first eigenvector components,
//! and dense symmetric eigenvalues.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Square symmetric matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).take(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn quadratic_form(&self, p: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += p[i] * self.get(i, j) * p[j];
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim == 0 {
            return Vec::new();
        }
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.data);
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn determinant(&self) -> f64 {
        if self.dim == 0 {
            return 1.0;
        }
        DMatrix::from_row_slice(self.dim, self.dim, &self.data).determinant()
    }
}

/// Outcome of a Cholesky attempt.
#[derive(Debug, Clone, PartialEq)]
pub enum Cholesky {
    /// Lower factor `L` with `A = L·Lᵀ`, rows of increasing length.
    Factor(Vec<Vec<f64>>),
    /// The Schur-complement pivot at `index` was `≤ tol`.
    Failed { index: usize, pivot: f64 },
}

/// Cholesky factorisation; every pivot `a_jj − Σ l_jk²` must exceed `tol`.
pub fn cholesky(a: &SymMatrix, tol: f64) -> Cholesky {
    let n = a.dim();
    let mut l: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = vec![0.0; j + 1];
        for k in 0..j {
            let mut s = a.get(j, k);
            for i in 0..k {
                s -= row[i] * l[k][i];
            }
            row[k] = s / l[k][k];
        }
        let pivot = a.get(j, j) - row[..j].iter().map(|v| v * v).sum::<f64>();
        if !(pivot > tol) {
            return Cholesky::Failed { index: j, pivot };
        }
        row[j] = pivot.sqrt();
        l.push(row);
    }
    Cholesky::Factor(l)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `offdiag`, together with the first component of each
/// normalised eigenvector. Implicit QL with Wilkinson shifts; results sorted
/// by eigenvalue.
pub fn tridiagonal_eigen(diag: &[f64], offdiag: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if offdiag.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "tridiagonal matrix of size {n} needs {} off-diagonal entries, got {}",
            n - 1,
            offdiag.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenNotConverged);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok((order.iter().map(|&i| d[i]).collect(), order.iter().map(|&i| z[i]).collect()))
}
