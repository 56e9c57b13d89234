use super::Matrix;
use crate::error::{Error, Result};

/// Maximum number of squarings of the system matrix.
pub const MAX_DOUBLINGS: usize = 64;

/// `‖A_k‖_F` must drop below this before the iteration may stop.
pub const CONTRACTION_THRESHOLD: f64 = 1e-8;

/// Solves `a * G * a^T - G + q = 0` for symmetric `G` by the doubling
/// iteration `G <- G + A_k G A_k^T`, `A_k <- A_k^2`.
///
/// After `k` steps `G` holds the first `2^k` terms of the series
/// `sum_t a^t q (a^T)^t`, so the residual is `A_k q A_k^T`. Once `‖A_k‖_F`
/// is below both [`CONTRACTION_THRESHOLD`] and `sqrt(tol)` the loop runs
/// until an update leaves every entry of `G` unchanged, so tiny diagonal
/// contributions of late series terms are kept. A matrix that is not
/// Schur stable never contracts and yields [`Error::NoConvergence`].
pub fn solve_dlyap(a: &Matrix, q: &Matrix, tol: f64) -> Result<Matrix> {
    if !a.is_square() || !q.is_square() || a.rows() != q.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("square operands of equal size (a is {}x{})", a.rows(), a.cols()),
            got: format!("q is {}x{}", q.rows(), q.cols()),
        });
    }
    let threshold = CONTRACTION_THRESHOLD.min(tol.sqrt());

    let mut g = q.symmetrized();
    let mut ak = a.clone();
    for _ in 0..MAX_DOUBLINGS {
        let norm = ak.frobenius_norm();
        if !norm.is_finite() {
            break;
        }
        // A_k G A_k^T = A_k (A_k G)^T because G is symmetric.
        let left = ak.matmul(&g)?;
        let term = ak.matmul(&left.transpose())?;
        let next = g.add(&term)?;
        if norm < threshold && next == g {
            return Ok(g.symmetrized());
        }
        g = next;
        ak = ak.matmul(&ak)?;
    }
    Err(Error::NoConvergence { what: "doubling Lyapunov solver", iterations: MAX_DOUBLINGS })
}

/// `‖a G a^T - G + q‖_F`.
pub fn dlyap_residual(a: &Matrix, g: &Matrix, q: &Matrix) -> Result<f64> {
    let aga = a.matmul(g)?.matmul(&a.transpose())?;
    Ok(aga.sub(g)?.add(q)?.frobenius_norm())
}
