//! Analytic bounds on Gramian spectra and condition numbers, each paired
//! with the measured quantity it constrains.

use std::f64::consts::PI;

use crate::densela::{singular_values_squared, Matrix, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::gramian::{compute_gramian, system_for_spec, ControlSystem, GramianMode};
use crate::graphs::{
    build_adjacency, col_abs_sums, local_bound, scale_adjacency, Family, FamilyKind, GraphSpec, Orientation,
};
use crate::leaders::LeaderPattern;

/// Relative slack allowed when deciding whether a bound holds.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundDirection {
    /// `measured <= bound`
    Upper,
    /// `measured >= bound`
    Lower,
}

/// The parameters a bound was evaluated with.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundInputs {
    pub family: Option<FamilyKind>,
    pub n: usize,
    pub gamma: Option<f64>,
    pub m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound_name: String,
    pub direction: BoundDirection,
    /// May be `+inf` for a vacuous bound.
    pub bound_value: f64,
    pub measured_value: f64,
    pub satisfied: bool,
    pub inputs: BoundInputs,
}

impl BoundReport {
    pub fn new(
        bound_name: impl Into<String>,
        direction: BoundDirection,
        bound_value: f64,
        measured_value: f64,
        inputs: BoundInputs,
    ) -> Self {
        let slack = BOUND_SLACK * bound_value.abs().max(1.0);
        let satisfied = match direction {
            BoundDirection::Upper => bound_value == f64::INFINITY || measured_value <= bound_value + slack,
            BoundDirection::Lower => measured_value >= bound_value - slack,
        };
        BoundReport { bound_name: bound_name.into(), direction, bound_value, measured_value, satisfied, inputs }
    }

    pub fn upper(name: impl Into<String>, bound: f64, measured: f64, inputs: BoundInputs) -> Self {
        BoundReport::new(name, BoundDirection::Upper, bound, measured, inputs)
    }
}

/// `(1 - sigma_N^2) / (1 - sigma_1^2)`.
pub fn singular_value_condition_bound(sigma1_sq: f64, sigman_sq: f64) -> Result<f64> {
    if sigma1_sq >= 1.0 {
        return Err(Error::Unstable { sigma1: sigma1_sq.sqrt() });
    }
    Ok((1.0 - sigman_sq) / (1.0 - sigma1_sq))
}

/// Per-index `(lower_i, upper_i)` enclosing the Gramian eigenvalues
/// `alpha_i`, built from the sorted diagonal of `B` and the extreme squared
/// singular values of the scaled network matrix.
pub fn lemma1_bounds(sys: &ControlSystem) -> Result<Vec<(f64, f64)>> {
    let s = singular_values_squared(sys.a_scaled(), DEFAULT_TOL)?;
    let s1 = s.largest().unwrap_or(0.0);
    let sn = s.smallest().unwrap_or(0.0);
    if s1 >= 1.0 {
        return Err(Error::Unstable { sigma1: s1.sqrt() });
    }
    let mut beta = sys.b().diagonal();
    beta.sort_by(|a, b| b.total_cmp(a));
    let beta_1 = beta[0];
    let beta_n = beta[beta.len() - 1];
    let low_shift = sn * beta_n / (1.0 - sn);
    let high_shift = beta_1 * s1 / (1.0 - s1);
    Ok(beta.iter().map(|&b| (b + low_shift, b + high_shift)).collect())
}

/// Condition-number bound for `B = I` from the extreme singular values of
/// the scaled network matrix, checked against the measured Gramian.
pub fn theorem1_bound(a_scaled: &Matrix) -> Result<BoundReport> {
    let s = singular_values_squared(a_scaled, DEFAULT_TOL)?;
    let bound = singular_value_condition_bound(s.largest().unwrap_or(0.0), s.smallest().unwrap_or(0.0))?;
    let n = a_scaled.rows();
    let sys = ControlSystem::from_parts(a_scaled.clone(), Matrix::identity(n), 1.0)?;
    let kappa = compute_gramian(&sys, GramianMode::Exact)?.kappa;
    Ok(BoundReport::upper("eq4", bound, kappa, BoundInputs { n, ..Default::default() }))
}

/// Schur-type bounds on `sigma_1(a)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurBound {
    /// `max_i sum_j |a_ij| C_j` with `C_j` the absolute column sums.
    pub intermediate: f64,
    /// `M^2` with `M` the local bound.
    pub coarse: f64,
}

pub fn schur_bound(a: &Matrix) -> SchurBound {
    let cols = col_abs_sums(a);
    let intermediate =
        (0..a.rows()).map(|i| a.row(i).iter().zip(&cols).map(|(v, c)| v.abs() * c).sum::<f64>()).fold(0.0, f64::max);
    let m = local_bound(a).local_bound_m;
    SchurBound { intermediate, coarse: m * m }
}

/// `gamma^2 / (gamma^2 - M^2)`: condition bound for a locally M-bounded
/// network scaled by `1/gamma`.
pub fn theorem2_bound(m: f64, gamma: f64) -> Result<f64> {
    if !(m >= 0.0) {
        return Err(Error::InvalidSpec(format!("local bound {m} must be non-negative")));
    }
    if !(gamma > m) {
        return Err(Error::InvalidGamma { gamma, bound: m });
    }
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    Ok(gamma * gamma / (gamma * gamma - m * m))
}

fn ratio_or_inf(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

/// Smallest `|cos|` among the undirected path eigenvalue angles
/// `i pi / (N+1)`.
fn path_min_abs_cos(n: usize) -> f64 {
    if n % 2 == 1 {
        0.0
    } else {
        (PI / (2.0 * (n as f64 + 1.0))).sin()
    }
}

/// Smallest `|cos|` among the undirected ring eigenvalue angles `2 pi k / N`.
fn ring_min_abs_cos(n: usize) -> f64 {
    let nf = n as f64;
    match n % 4 {
        0 => 0.0,
        2 => (PI / nf).sin(),
        _ => (PI / (2.0 * nf)).sin(),
    }
}

/// Closed-form condition bound `(1 - sigma_N^2)/(1 - sigma_1^2)` of the
/// family scaled by `1/gamma`, written per family.
pub fn family_bound_value(spec: &GraphSpec, gamma: f64) -> Result<f64> {
    let n = spec.size();
    let nf = n as f64;
    let g2 = gamma * gamma;
    let sigma1_sq = crate::graphs::sigma1_supremum(spec.kind(), n)?.powi(2);
    let exact_sigma1_sq = match (spec.family(), spec.orientation()) {
        (Family::Path, Orientation::Undirected) => 4.0 * (PI / (nf + 1.0)).cos().powi(2),
        _ => sigma1_sq,
    };
    if !(g2 > exact_sigma1_sq) {
        return Err(Error::Unstable { sigma1: exact_sigma1_sq.sqrt() / gamma });
    }
    Ok(match (spec.family(), spec.orientation()) {
        (Family::Star, Orientation::Undirected) if n == 2 => 1.0,
        (Family::Star, _) => g2 / (g2 - (nf - 1.0)),
        (Family::Path, Orientation::Undirected) => {
            let c = path_min_abs_cos(n);
            (g2 - 4.0 * c * c) / (g2 - exact_sigma1_sq)
        }
        (Family::Ring, Orientation::Undirected) => {
            let c = ring_min_abs_cos(n);
            (g2 - 4.0 * c * c) / (g2 - 4.0)
        }
        (Family::Complete, Orientation::Undirected) => (g2 - 1.0) / (g2 - (nf - 1.0).powi(2)),
        (Family::Path, Orientation::Directed) => g2 / (g2 - 1.0),
        (Family::Ring, Orientation::Directed) => 1.0,
        (Family::Complete, Orientation::Directed) => return Err(Error::Unsupported("directed complete graph".into())),
    })
}

/// The family condition bounds exactly as commonly printed: the path and
/// ring numerators use the `floor(N/2)` eigenvalue and the directed star
/// squares `N - 1`. Non-positive denominators give `+inf`.
pub fn printed_family_bound(spec: &GraphSpec, gamma: f64) -> Result<f64> {
    let n = spec.size();
    let nf = n as f64;
    let half = (n / 2) as f64;
    let g2 = gamma * gamma;
    Ok(match (spec.family(), spec.orientation()) {
        (Family::Star, Orientation::Undirected) => ratio_or_inf(g2, g2 - (nf - 1.0)),
        (Family::Path, Orientation::Undirected) => {
            ratio_or_inf(g2 - 4.0 * (half * PI / (nf + 1.0)).cos().powi(2), g2 - 4.0 * (PI / (nf + 1.0)).cos().powi(2))
        }
        (Family::Ring, Orientation::Undirected) => ratio_or_inf(g2 - 4.0 * (half * PI / nf).cos().powi(2), g2 - 4.0),
        (Family::Complete, Orientation::Undirected) => ratio_or_inf(g2 - 1.0, g2 - (nf - 1.0).powi(2)),
        (Family::Star, Orientation::Directed) => ratio_or_inf(g2, g2 - (nf - 1.0).powi(2)),
        (Family::Path, Orientation::Directed) => ratio_or_inf(g2, g2 - 1.0),
        (Family::Ring, Orientation::Directed) => 1.0,
        (Family::Complete, Orientation::Directed) => return Err(Error::Unsupported("directed complete graph".into())),
    })
}

fn measured_kappa(spec: &GraphSpec, gamma: f64) -> Result<f64> {
    let a = scale_adjacency(&build_adjacency(spec), gamma)?;
    let n = spec.size();
    let sys = ControlSystem::from_parts(a, Matrix::identity(n), gamma)?;
    Ok(compute_gramian(&sys, GramianMode::Exact)?.kappa)
}

fn family_inputs(spec: &GraphSpec, gamma: f64) -> BoundInputs {
    let m = local_bound(&build_adjacency(spec)).local_bound_m;
    BoundInputs { family: Some(spec.kind()), n: spec.size(), gamma: Some(gamma), m: Some(m) }
}

/// Closed-form family bound against the measured condition number (`B = I`).
pub fn family_bound(spec: &GraphSpec, gamma: f64) -> Result<BoundReport> {
    let bound = family_bound_value(spec, gamma)?;
    let kappa = measured_kappa(spec, gamma)?;
    Ok(BoundReport::upper("family", bound, kappa, family_inputs(spec, gamma)))
}

/// [`printed_family_bound`] against the measured condition number.
pub fn printed_family_report(spec: &GraphSpec, gamma: f64) -> Result<BoundReport> {
    family_bound_value(spec, gamma)?;
    let bound = printed_family_bound(spec, gamma)?;
    let kappa = measured_kappa(spec, gamma)?;
    Ok(BoundReport::upper("family_printed", bound, kappa, family_inputs(spec, gamma)))
}

/// Measured conditioning of one canonical network (all nodes leading)
/// next to its condition-number bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeSweepRow {
    pub n: usize,
    pub gamma: f64,
    pub kappa: f64,
    pub lambda_min: f64,
    pub bound_eq4: f64,
    pub bound_family: f64,
    /// `+inf` when `gamma` does not exceed the local bound.
    pub bound_theorem2: f64,
}

pub fn size_sweep_row(spec: &GraphSpec, gamma: f64) -> Result<SizeSweepRow> {
    let a = build_adjacency(spec);
    let eq4 = theorem1_bound(&scale_adjacency(&a, gamma)?)?;
    let m = local_bound(&a).local_bound_m;
    let bound_theorem2 = if gamma > m { theorem2_bound(m, gamma)? } else { f64::INFINITY };
    let sys = system_for_spec(spec, gamma, &LeaderPattern::All)?;
    let g = compute_gramian(&sys, GramianMode::Exact)?;
    Ok(SizeSweepRow {
        n: spec.size(),
        gamma,
        kappa: g.kappa,
        lambda_min: g.lambda_min,
        bound_eq4: eq4.bound_value,
        bound_family: family_bound_value(spec, gamma)?,
        bound_theorem2,
    })
}
