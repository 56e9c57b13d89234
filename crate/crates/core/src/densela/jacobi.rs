use super::{Matrix, Spectrum, SpectrumKind};
use crate::error::{Error, Result};

/// Maximum number of full cyclic sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Squared singular values smaller than this are reported as exact zeros.
pub const SINGULAR_CLAMP: f64 = 1e-14;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// descending.
///
/// The input must be symmetric to within `tol` relative to its largest
/// entry. Sweeps stop once the off-diagonal Frobenius norm is at most
/// `tol` times the Frobenius norm of the input.
pub fn sym_eigenvalues(m: &Matrix, tol: f64) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let asym = m.max_asymmetry();
    if asym > tol * m.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }

    let n = m.rows();
    let mut a = m.symmetrized();
    let target = tol * m.frobenius_norm();

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { what: "Jacobi eigensolver", iterations: MAX_SWEEPS });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
    }

    Ok(Spectrum::new(a.diagonal(), SpectrumKind::Eigenvalues))
}

/// Squared singular values of a square matrix, i.e. the eigenvalues of
/// `a * a^T`, sorted descending and clamped at zero.
pub fn singular_values_squared(a: &Matrix, tol: f64) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let eig = sym_eigenvalues(&a.gram(), tol)?;
    let values = eig.values().iter().map(|&v| if v < SINGULAR_CLAMP { 0.0 } else { v }).collect();
    Ok(Spectrum::new(values, SpectrumKind::SquaredSingularValues))
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for (j, v) in a.row(i).iter().enumerate() {
            if i != j {
                sum += v * v;
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with a plane rotation applied from both sides.
fn rotate(a: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let app = a[(p, p)];
    let aqq = a[(q, q)];
    // Negligible relative to both diagonal entries: drop it.
    if apq.abs() <= 1e-2 * f64::EPSILON * (app * aqq).abs().sqrt() {
        a[(p, q)] = 0.0;
        a[(q, p)] = 0.0;
        return;
    }

    let theta = (aqq - app) / (2.0 * apq);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    a[(p, p)] = app - t * apq;
    a[(q, q)] = aqq + t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for r in 0..a.rows() {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let new_rp = arp - s * (arq + tau * arp);
        let new_rq = arq + s * (arp - tau * arq);
        a[(r, p)] = new_rp;
        a[(p, r)] = new_rp;
        a[(r, q)] = new_rq;
        a[(q, r)] = new_rq;
    }
}
