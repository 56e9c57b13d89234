//! Controllability Gramians of `x(t+1) = A x(t) + B u(t)`.

use crate::densela::{self, Matrix, Spectrum, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::graphs::{build_adjacency, Family, GraphSpec};
use crate::leaders::{build_leader_matrix, Boundary, LeaderPattern};

/// A Gramian is declared positive definite when its smallest eigenvalue
/// exceeds this fraction of its largest.
pub const PD_RELATIVE_THRESHOLD: f64 = 1e-10;

/// Default horizon for series-mode Gramians.
pub const DEFAULT_T_MAX: usize = 500;

/// Series summation stops once a term's Frobenius norm drops below this
/// fraction of the running sum.
pub const SERIES_EARLY_EXIT: f64 = 1e-14;

/// Scaled network matrix `A / gamma` with a diagonal 0/1 input matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSystem {
    a_scaled: Matrix,
    b: Matrix,
    gamma: f64,
    source_spec: Option<GraphSpec>,
}

impl ControlSystem {
    pub fn a_scaled(&self) -> &Matrix {
        &self.a_scaled
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn source_spec(&self) -> Option<&GraphSpec> {
        self.source_spec.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.a_scaled.rows()
    }

    /// Number of nodes with `B_ii = 1`.
    pub fn leader_count(&self) -> usize {
        self.b.diagonal().iter().filter(|&&v| v == 1.0).count()
    }

    /// Same network, different input matrix.
    pub fn with_input_matrix(&self, b: Matrix) -> Result<ControlSystem> {
        check_input_matrix(&b, self.dim())?;
        Ok(ControlSystem { b, ..self.clone() })
    }

    /// Builds a system from an already scaled matrix without re-certifying
    /// stability. Used by the closed-form checks and sweeps.
    pub(crate) fn from_parts(a_scaled: Matrix, b: Matrix, gamma: f64) -> Result<ControlSystem> {
        if !a_scaled.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square network matrix".into(),
                got: format!("{}x{}", a_scaled.rows(), a_scaled.cols()),
            });
        }
        check_input_matrix(&b, a_scaled.rows())?;
        Ok(ControlSystem { a_scaled, b, gamma, source_spec: None })
    }
}

fn check_input_matrix(b: &Matrix, n: usize) -> Result<()> {
    if b.rows() != n || b.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} input matrix"),
            got: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    let diag_01 = b.diagonal().iter().all(|&v| v == 0.0 || v == 1.0);
    if !b.is_diagonal() || !diag_01 {
        return Err(Error::InvalidPattern("input matrix must be diagonal with 0/1 entries".into()));
    }
    Ok(())
}

/// Largest singular value, computed numerically.
pub fn sigma1(a: &Matrix) -> Result<f64> {
    let s = densela::singular_values_squared(a, DEFAULT_TOL)?;
    Ok(s.largest().unwrap_or(0.0).sqrt())
}

/// Scales `a` by `1/gamma` and attaches the leader input matrix.
///
/// Fails with [`Error::Unstable`] unless `gamma` strictly exceeds the
/// numerically computed `sigma_1(a)`.
pub fn make_system(a: &Matrix, gamma: f64, leaders: &LeaderPattern, boundary: Boundary) -> Result<ControlSystem> {
    let a_scaled = crate::graphs::scale_adjacency(a, gamma)?;
    let s1 = sigma1(&a_scaled)?;
    if s1 >= 1.0 {
        return Err(Error::Unstable { sigma1: s1 });
    }
    let b = build_leader_matrix(leaders, a.rows(), boundary)?;
    ControlSystem::from_parts(a_scaled, b, gamma)
}

/// [`make_system`] for a canonical graph; rings use periodic leader
/// placement.
pub fn system_for_spec(spec: &GraphSpec, gamma: f64, leaders: &LeaderPattern) -> Result<ControlSystem> {
    let boundary = if spec.family() == Family::Ring { Boundary::Periodic } else { Boundary::Open };
    let mut sys = make_system(&build_adjacency(spec), gamma, leaders, boundary)?;
    sys.source_spec = Some(*spec);
    Ok(sys)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramianMode {
    /// Infinite-horizon Gramian from the Lyapunov equation.
    Exact,
    /// Partial sum `G(t_max)`.
    Series { t_max: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramianAnalysis {
    pub gramian: Matrix,
    /// Eigenvalues of the Gramian, descending.
    pub eigenvalues: Spectrum,
    /// `+inf` when the Gramian is not positive definite.
    pub kappa: f64,
    pub lambda_min: f64,
    pub positive_definite: bool,
}

impl GramianAnalysis {
    pub fn from_gramian(gramian: Matrix) -> Result<Self> {
        let eigenvalues = densela::sym_eigenvalues(&gramian, DEFAULT_TOL)?;
        let largest = eigenvalues.largest().unwrap_or(0.0);
        let lambda_min = eigenvalues.smallest().unwrap_or(0.0);
        let positive_definite = largest > 0.0 && lambda_min > PD_RELATIVE_THRESHOLD * largest;
        let kappa = if positive_definite { largest / lambda_min } else { f64::INFINITY };
        Ok(GramianAnalysis { gramian, eigenvalues, kappa, lambda_min, positive_definite })
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.largest().unwrap_or(0.0)
    }
}

pub fn gramian_matrix(sys: &ControlSystem, mode: GramianMode) -> Result<Matrix> {
    let q = sys.b.matmul(&sys.b.transpose())?;
    match mode {
        GramianMode::Exact => densela::solve_dlyap(&sys.a_scaled, &q, DEFAULT_TOL),
        GramianMode::Series { t_max } => Ok(series_gramian(&sys.a_scaled, &q, t_max, true)),
    }
}

pub fn compute_gramian(sys: &ControlSystem, mode: GramianMode) -> Result<GramianAnalysis> {
    GramianAnalysis::from_gramian(gramian_matrix(sys, mode)?)
}

/// `sum_{tau=0}^{t_max} a^tau q (a^T)^tau`, optionally stopping at the first
/// negligible term.
fn series_gramian(a: &Matrix, q: &Matrix, t_max: usize, early_exit: bool) -> Matrix {
    let mut sum = q.clone();
    let mut term = q.clone();
    for _ in 0..t_max {
        let next = a.matmul(&term).and_then(|at| a.matmul(&at.transpose()));
        term = next.expect("square operands of equal size");
        let term_norm = term.frobenius_norm();
        sum = sum.add(&term).expect("equal shapes");
        if term_norm == 0.0 || (early_exit && term_norm <= SERIES_EARLY_EXIT * sum.frobenius_norm()) {
            break;
        }
    }
    sum.symmetrized()
}

/// State after applying `inputs` in order, starting from `x0`.
pub fn simulate(sys: &ControlSystem, x0: &[f64], inputs: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = sys.dim();
    if x0.len() != n {
        return Err(dim_error(n, x0.len()));
    }
    let mut x = x0.to_vec();
    for u in inputs {
        if u.len() != n {
            return Err(dim_error(n, u.len()));
        }
        let ax = sys.a_scaled.matvec(&x)?;
        let bu = sys.b.matvec(u)?;
        x = ax.iter().zip(&bu).map(|(a, b)| a + b).collect();
    }
    Ok(x)
}

fn dim_error(expected: usize, got: usize) -> Error {
    Error::DimensionMismatch { expected: format!("vector of length {expected}"), got: format!("length {got}") }
}

/// `G(t-1)` from the series, required positive definite.
fn reachability_gramian(sys: &ControlSystem, t: usize) -> Result<GramianAnalysis> {
    if t == 0 {
        return Err(Error::InvalidSpec("steering horizon must be at least 1".into()));
    }
    // The steering identity needs the full finite sum, not an early exit.
    let q = sys.b.matmul(&sys.b.transpose())?;
    let analysis = GramianAnalysis::from_gramian(series_gramian(&sys.a_scaled, &q, t - 1, false))?;
    if !analysis.positive_definite {
        return Err(Error::NotPositiveDefinite { index: sys.dim() - 1, pivot: analysis.lambda_min });
    }
    Ok(analysis)
}

/// Least-norm input sequence `u(0..t)` steering the zero state to `x_des`
/// in `t` steps: `u(tau) = B^T (A^T)^(t-1-tau) G(t-1)^-1 x_des`.
pub fn least_norm_input(sys: &ControlSystem, x_des: &[f64], t: usize) -> Result<Vec<Vec<f64>>> {
    let n = sys.dim();
    if x_des.len() != n {
        return Err(dim_error(n, x_des.len()));
    }
    if t == 0 {
        return Err(Error::InvalidSpec("steering horizon must be at least 1".into()));
    }
    if x_des.iter().all(|&v| v == 0.0) {
        return Ok(vec![vec![0.0; n]; t]);
    }
    let g = reachability_gramian(sys, t)?;
    let y = densela::spd_solve(&g.gramian, x_des)?;

    // powers[s] = (A^T)^s y
    let at = sys.a_scaled.transpose();
    let mut powers = Vec::with_capacity(t);
    powers.push(y);
    for s in 1..t {
        let next = at.matvec(&powers[s - 1])?;
        powers.push(next);
    }
    let bt = sys.b.transpose();
    (0..t).map(|tau| bt.matvec(&powers[t - 1 - tau])).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horizon {
    /// Reach the target in exactly this many steps; uses `G(t-1)`.
    Steps(usize),
    /// Infinite horizon; uses the Lyapunov solution.
    Infinite,
}

/// Minimum input energy `x_des^T G^-1 x_des` to reach `x_des` from zero.
pub fn min_energy(sys: &ControlSystem, x_des: &[f64], horizon: Horizon) -> Result<f64> {
    let n = sys.dim();
    if x_des.len() != n {
        return Err(dim_error(n, x_des.len()));
    }
    if x_des.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let g = match horizon {
        Horizon::Steps(t) => reachability_gramian(sys, t)?,
        Horizon::Infinite => {
            let g = compute_gramian(sys, GramianMode::Exact)?;
            if !g.positive_definite {
                return Err(Error::NotPositiveDefinite { index: n - 1, pivot: g.lambda_min });
            }
            g
        }
    };
    let y = densela::spd_solve(&g.gramian, x_des)?;
    Ok(x_des.iter().zip(&y).map(|(a, b)| a * b).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Family, Orientation};

    fn spec(f: Family, o: Orientation, n: usize) -> GraphSpec {
        GraphSpec::new(f, o, n).unwrap()
    }

    fn zero_system(n: usize) -> ControlSystem {
        ControlSystem::from_parts(Matrix::zeros(n, n), Matrix::identity(n), 1.0).unwrap()
    }

    #[test]
    fn make_system_examples() {
        let ring = system_for_spec(&spec(Family::Ring, Orientation::Directed, 3), 2.0, &LeaderPattern::All).unwrap();
        assert_eq!(ring.b(), &Matrix::identity(3));
        assert_eq!(ring.a_scaled()[(1, 0)], 0.5);

        let leaders = LeaderPattern::explicit([1]);
        let path = system_for_spec(&spec(Family::Path, Orientation::Directed, 3), 2.0, &leaders).unwrap();
        assert_eq!(path.b().diagonal(), vec![1.0, 0.0, 0.0]);

        let star = system_for_spec(&spec(Family::Star, Orientation::Undirected, 5), 4.0, &LeaderPattern::All).unwrap();
        assert!((sigma1(star.a_scaled()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn make_system_rejects_small_gamma() {
        let sp = spec(Family::Ring, Orientation::Directed, 4);
        assert!(matches!(system_for_spec(&sp, 1.0, &LeaderPattern::All), Err(Error::Unstable { .. })));
        assert!(matches!(system_for_spec(&sp, 0.0, &LeaderPattern::All), Err(Error::InvalidGamma { .. })));
    }

    #[test]
    fn gramian_examples() {
        let ring = system_for_spec(&spec(Family::Ring, Orientation::Directed, 3), 2.0, &LeaderPattern::All).unwrap();
        let g = compute_gramian(&ring, GramianMode::Exact).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 4.0 / 3.0 } else { 0.0 };
                assert!((g.gramian[(i, j)] - want).abs() < 1e-14);
            }
        }
        assert!((g.kappa - 1.0).abs() < 1e-12);

        let star = system_for_spec(&spec(Family::Star, Orientation::Directed, 3), 2.0, &LeaderPattern::All).unwrap();
        let g = compute_gramian(&star, GramianMode::Exact).unwrap().gramian;
        let want = Matrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.25, 0.25], vec![0.0, 0.25, 1.25]]).unwrap();
        assert!(g.sub(&want).unwrap().frobenius_norm() < 1e-15);

        let g = compute_gramian(&zero_system(4), GramianMode::Exact).unwrap();
        assert_eq!(g.gramian, Matrix::identity(4));
        assert_eq!(g.kappa, 1.0);
    }

    #[test]
    fn series_mode_is_exact_for_nilpotent_matrices() {
        let sp = spec(Family::Path, Orientation::Directed, 6);
        let sys = system_for_spec(&sp, 2.0, &LeaderPattern::All).unwrap();
        let exact = compute_gramian(&sys, GramianMode::Exact).unwrap().gramian;
        let series = compute_gramian(&sys, GramianMode::Series { t_max: 5 }).unwrap().gramian;
        assert!(exact.sub(&series).unwrap().frobenius_norm() < 1e-15);
        let short = compute_gramian(&sys, GramianMode::Series { t_max: 0 }).unwrap().gramian;
        assert_eq!(short, Matrix::identity(6));
    }

    #[test]
    fn uncontrollable_star_is_detected() {
        let sp = spec(Family::Star, Orientation::Directed, 3);
        let sys = system_for_spec(&sp, 2.0, &LeaderPattern::explicit([2, 3])).unwrap();
        let g = compute_gramian(&sys, GramianMode::Exact).unwrap();
        assert!(!g.positive_definite);
        assert_eq!(g.kappa, f64::INFINITY);
    }

    #[test]
    fn simulate_examples() {
        let sys = zero_system(2);
        assert_eq!(simulate(&sys, &[0.0, 0.0], &[]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(simulate(&sys, &[0.0, 0.0], &[vec![1.0, 2.0]]).unwrap(), vec![1.0, 2.0]);
        assert!(simulate(&sys, &[0.0], &[]).is_err());
        assert!(simulate(&sys, &[0.0, 0.0], &[vec![1.0]]).is_err());

        let path = system_for_spec(&spec(Family::Path, Orientation::Directed, 3), 2.0, &LeaderPattern::All).unwrap();
        let x = simulate(&path, &[1.0, 0.0, 0.0], &[vec![0.0; 3]]).unwrap();
        assert_eq!(x, vec![0.0, 0.5, 0.0]);
    }

    #[test]
    fn least_norm_input_examples() {
        let u = least_norm_input(&zero_system(3), &[1.0, -2.0, 0.5], 1).unwrap();
        assert_eq!(u, vec![vec![1.0, -2.0, 0.5]]);

        let ring = system_for_spec(&spec(Family::Ring, Orientation::Directed, 3), 2.0, &LeaderPattern::All).unwrap();
        let u = least_norm_input(&ring, &[1.0, 0.0, 0.0], 1).unwrap();
        assert_eq!(u, vec![vec![1.0, 0.0, 0.0]]);

        let u = least_norm_input(&ring, &[0.0; 3], 4).unwrap();
        assert_eq!(u, vec![vec![0.0; 3]; 4]);

        assert!(least_norm_input(&ring, &[1.0, 0.0, 0.0], 0).is_err());
    }

    #[test]
    fn least_norm_input_needs_reachability() {
        let path =
            system_for_spec(&spec(Family::Path, Orientation::Directed, 3), 2.0, &LeaderPattern::explicit([1])).unwrap();
        // Node 3 is two hops from the only leader.
        assert!(matches!(least_norm_input(&path, &[0.0, 0.0, 1.0], 2), Err(Error::NotPositiveDefinite { .. })));
        let u = least_norm_input(&path, &[0.0, 0.0, 1.0], 3).unwrap();
        let x = simulate(&path, &[0.0; 3], &u).unwrap();
        assert!((x[2] - 1.0).abs() < 1e-12 && x[0].abs() < 1e-12 && x[1].abs() < 1e-12);
    }

    #[test]
    fn min_energy_examples() {
        let e = min_energy(&zero_system(3), &[0.0, 1.0, 0.0], Horizon::Steps(5)).unwrap();
        assert!((e - 1.0).abs() < 1e-15);

        let ring = system_for_spec(&spec(Family::Ring, Orientation::Directed, 3), 2.0, &LeaderPattern::All).unwrap();
        let e = min_energy(&ring, &[1.0, 0.0, 0.0], Horizon::Infinite).unwrap();
        assert!((e - 0.75).abs() < 1e-14);
        assert_eq!(min_energy(&ring, &[0.0; 3], Horizon::Infinite).unwrap(), 0.0);

        let u = least_norm_input(&ring, &[0.3, -1.0, 2.0], 4).unwrap();
        let realized: f64 = u.iter().flatten().map(|v| v * v).sum();
        let e = min_energy(&ring, &[0.3, -1.0, 2.0], Horizon::Steps(4)).unwrap();
        assert!((realized - e).abs() <= 1e-12 * e);
    }
}
