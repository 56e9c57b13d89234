//! Canonical network families and their spectra.
//!
//! Entry convention: an edge `i -> j` is stored at `A[j][i]`, so the state
//! of node `j` is driven by node `i`. Nodes are labelled `1..=N` in the
//! public API and `0..N` internally.

mod io;

pub use io::{read_adjacency, write_adjacency};

use std::fmt;
use std::str::FromStr;

use crate::densela::{Matrix, Spectrum, SpectrumKind};
use crate::error::{Error, Result};

/// Largest network size accepted by [`GraphSpec::new`].
pub const MAX_SIZE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Star,
    Path,
    Ring,
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Directed,
    Undirected,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Star, Family::Path, Family::Ring, Family::Complete];

    pub fn min_size(self) -> usize {
        match self {
            Family::Ring => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::Path => "path",
            Family::Ring => "ring",
            Family::Complete => "complete",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "star" => Ok(Family::Star),
            "path" | "chain" => Ok(Family::Path),
            "ring" | "cycle" => Ok(Family::Ring),
            "complete" => Ok(Family::Complete),
            other => Err(Error::InvalidSpec(format!("unknown family '{other}'"))),
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Directed => "directed",
            Orientation::Undirected => "undirected",
        })
    }
}

/// Family and orientation without a size; identifies a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyKind {
    pub family: Family,
    pub orientation: Orientation,
}

impl FamilyKind {
    pub fn new(family: Family, orientation: Orientation) -> Result<Self> {
        if family == Family::Complete && orientation == Orientation::Directed {
            return Err(Error::InvalidSpec("complete graphs have no directed variant".into()));
        }
        Ok(FamilyKind { family, orientation })
    }

    /// The seven supported family/orientation combinations.
    pub fn all() -> Vec<FamilyKind> {
        let mut out = Vec::new();
        for orientation in [Orientation::Undirected, Orientation::Directed] {
            for family in Family::ALL {
                if let Ok(k) = FamilyKind::new(family, orientation) {
                    out.push(k);
                }
            }
        }
        out
    }

    pub fn is_directed(&self) -> bool {
        self.orientation == Orientation::Directed
    }

    pub fn with_size(self, size: usize) -> Result<GraphSpec> {
        GraphSpec::new(self.family, self.orientation, size)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.orientation, self.family)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphSpec {
    kind: FamilyKind,
    size: usize,
}

impl GraphSpec {
    pub fn new(family: Family, orientation: Orientation, size: usize) -> Result<Self> {
        let kind = FamilyKind::new(family, orientation)?;
        if size < family.min_size() || size > MAX_SIZE {
            return Err(Error::InvalidSpec(format!("{family} size {size} outside {}..={MAX_SIZE}", family.min_size())));
        }
        Ok(GraphSpec { kind, size })
    }

    pub fn family(&self) -> Family {
        self.kind.family
    }

    pub fn orientation(&self) -> Orientation {
        self.kind.orientation
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_directed(&self) -> bool {
        self.kind.is_directed()
    }
}

/// 0-1 adjacency matrix of a canonical graph.
///
/// Directed star edges point from the centre (node 1) outwards, the
/// directed path runs `1 -> 2 -> ... -> N`, and the directed ring adds the
/// closing edge `N -> 1`. Undirected variants are the symmetrized versions.
pub fn build_adjacency(spec: &GraphSpec) -> Matrix {
    let n = spec.size();
    let mut a = Matrix::zeros(n, n);
    let mut edge = |from: usize, to: usize| a[(to, from)] = 1.0;
    match spec.family() {
        Family::Star => (1..n).for_each(|j| edge(0, j)),
        Family::Path => (0..n - 1).for_each(|i| edge(i, i + 1)),
        Family::Ring => (0..n).for_each(|i| edge(i, (i + 1) % n)),
        Family::Complete => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        edge(i, j);
                    }
                }
            }
        }
    }
    if spec.is_directed() {
        a
    } else {
        let at = a.transpose();
        let mut sym = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                sym[(i, j)] = a[(i, j)].max(at[(i, j)]);
            }
        }
        sym
    }
}

/// Absolute row and column sums of a network matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessReport {
    pub max_row_sum: f64,
    pub max_col_sum: f64,
    /// `max(max_row_sum, max_col_sum)`.
    pub local_bound_m: f64,
}

impl BoundednessReport {
    /// Both maxima strictly below `m`.
    pub fn strictly_bounded_by(&self, m: f64) -> bool {
        self.max_row_sum < m && self.max_col_sum < m
    }

    /// Both maxima at most `m`.
    pub fn bounded_by(&self, m: f64) -> bool {
        self.max_row_sum <= m && self.max_col_sum <= m
    }
}

pub fn local_bound(a: &Matrix) -> BoundednessReport {
    let row_sums = row_abs_sums(a);
    let col_sums = col_abs_sums(a);
    let max_row_sum = row_sums.iter().copied().fold(0.0, f64::max);
    let max_col_sum = col_sums.iter().copied().fold(0.0, f64::max);
    BoundednessReport { max_row_sum, max_col_sum, local_bound_m: max_row_sum.max(max_col_sum) }
}

pub(crate) fn row_abs_sums(a: &Matrix) -> Vec<f64> {
    (0..a.rows()).map(|i| a.row(i).iter().map(|v| v.abs()).sum()).collect()
}

pub(crate) fn col_abs_sums(a: &Matrix) -> Vec<f64> {
    let mut sums = vec![0.0; a.cols()];
    for i in 0..a.rows() {
        for (s, v) in sums.iter_mut().zip(a.row(i)) {
            *s += v.abs();
        }
    }
    sums
}

/// `a / gamma`.
pub fn scale_adjacency(a: &Matrix, gamma: f64) -> Result<Matrix> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidGamma { gamma, bound: 0.0 });
    }
    Ok(a.scale(1.0 / gamma))
}

/// Supremum of the largest singular value over all members of the family
/// with size at most `n_max`.
pub fn sigma1_supremum(kind: FamilyKind, n_max: usize) -> Result<f64> {
    if n_max < kind.family.min_size() {
        return Err(Error::InvalidSpec(format!("n_max {n_max} below minimum {} for {kind}", kind.family.min_size())));
    }
    Ok(match (kind.family, kind.orientation) {
        (Family::Star, _) => ((n_max - 1) as f64).sqrt(),
        (Family::Complete, _) => (n_max - 1) as f64,
        (Family::Path | Family::Ring, Orientation::Undirected) => 2.0,
        (Family::Path | Family::Ring, Orientation::Directed) => 1.0,
    })
}

/// Scale that makes `A / gamma` Schur stable for every family member of
/// size at most `n_max`.
pub fn choose_gamma(kind: FamilyKind, n_max: usize, margin: f64) -> Result<f64> {
    if !(margin > 1.0) || !margin.is_finite() {
        return Err(Error::InvalidSpec(format!("margin {margin} must exceed 1")));
    }
    Ok(margin * sigma1_supremum(kind, n_max)?)
}

/// Known spectrum of a canonical graph: eigenvalues for undirected graphs,
/// squared singular values for directed ones.
pub fn closed_form_spectrum(spec: &GraphSpec) -> Result<Spectrum> {
    use std::f64::consts::PI;
    let n = spec.size();
    let nf = n as f64;
    let values: Vec<f64> = match (spec.family(), spec.orientation()) {
        (Family::Star, Orientation::Undirected) => {
            let r = (nf - 1.0).sqrt();
            let mut v = vec![0.0; n];
            v[0] = r;
            v[n - 1] = -r;
            v
        }
        (Family::Path, Orientation::Undirected) => (1..=n).map(|i| 2.0 * (i as f64 * PI / (nf + 1.0)).cos()).collect(),
        (Family::Ring, Orientation::Undirected) => {
            (1..=n).map(|i| 2.0 * (2.0 * PI * (i - 1) as f64 / nf).cos()).collect()
        }
        (Family::Complete, Orientation::Undirected) => {
            let mut v = vec![-1.0; n];
            v[0] = nf - 1.0;
            v
        }
        (Family::Star, Orientation::Directed) => {
            let mut v = vec![0.0; n];
            v[0] = nf - 1.0;
            v
        }
        (Family::Path, Orientation::Directed) => {
            let mut v = vec![1.0; n];
            v[n - 1] = 0.0;
            v
        }
        (Family::Ring, Orientation::Directed) => vec![1.0; n],
        (Family::Complete, Orientation::Directed) => return Err(Error::Unsupported("directed complete graph".into())),
    };
    let kind = if spec.is_directed() { SpectrumKind::SquaredSingularValues } else { SpectrumKind::Eigenvalues };
    Ok(Spectrum::new(values, kind))
}

/// Closed-form squared singular values `(sigma_1^2, sigma_N^2)`. For
/// symmetric adjacencies these are the largest and smallest squared
/// eigenvalue magnitudes.
pub fn closed_form_extreme_sigma2(spec: &GraphSpec) -> Result<(f64, f64)> {
    let s = closed_form_spectrum(spec)?;
    if spec.is_directed() {
        return Ok((s.values()[0], s.values()[s.len() - 1]));
    }
    let squares = s.values().iter().map(|v| v * v);
    let hi = squares.clone().fold(0.0, f64::max);
    let lo = squares.fold(f64::INFINITY, f64::min);
    Ok((hi, lo))
}
