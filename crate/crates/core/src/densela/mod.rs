//! Dense linear algebra kernels: symmetric eigenvalues, squared singular
//! values, the discrete Lyapunov equation and SPD solves.

mod dlyap;
mod jacobi;
mod matrix;

pub use dlyap::{dlyap_residual, solve_dlyap, CONTRACTION_THRESHOLD, MAX_DOUBLINGS};
pub use jacobi::{singular_values_squared, sym_eigenvalues, MAX_SWEEPS, SINGULAR_CLAMP};
pub use matrix::Matrix;

use crate::error::{Error, Result};

/// Relative tolerance used throughout unless a caller asks otherwise.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Eigenvalues,
    SquaredSingularValues,
}

/// Real spectrum sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    kind: SpectrumKind,
}

impl Spectrum {
    /// Sorts `values` descending. Squared singular values are clamped at 0.
    pub fn new(mut values: Vec<f64>, kind: SpectrumKind) -> Self {
        if kind == SpectrumKind::SquaredSingularValues {
            for v in &mut values {
                *v = v.max(0.0);
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum { values, kind }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn largest(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn smallest(&self) -> Option<f64> {
        self.values.last().copied()
    }
}

/// Ratio of the largest to the smallest value.
pub fn condition_number(s: &Spectrum) -> Result<f64> {
    let (Some(hi), Some(lo)) = (s.largest(), s.smallest()) else {
        return Err(Error::Singular { smallest: f64::NAN });
    };
    if lo <= 0.0 {
        return Err(Error::Singular { smallest: lo });
    }
    Ok(hi / lo)
}

/// Solves `g * y = rhs` for symmetric positive definite `g` through a
/// Cholesky factorization `g = L L^T`.
pub fn spd_solve(g: &Matrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = g.rows();
    if !g.is_square() || rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("square matrix and rhs of length {}", g.rows()),
            got: format!("{}x{} matrix, rhs of length {}", g.rows(), g.cols(), rhs.len()),
        });
    }

    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = g[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !(pivot > 0.0) {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = g[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }

    // L z = rhs, then L^T y = z.
    let mut z = rhs.to_vec();
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[(i, k)] * z[k]).sum();
        z[i] = (z[i] - s) / l[(i, i)];
    }
    let mut y = z;
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|k| l[(k, i)] * y[k]).sum();
        y[i] = (y[i] - s) / l[(i, i)];
    }
    Ok(y)
}
