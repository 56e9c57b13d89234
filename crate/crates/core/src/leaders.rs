//! Leader (input) node selection, closed-form Gramians for directed stars
//! and paths, and the ring block-leader sweep.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::densela::Matrix;
use crate::error::{Error, Result};
use crate::gramian::{compute_gramian, ControlSystem, GramianMode};
use crate::graphs::{build_adjacency, scale_adjacency, Family, GraphSpec, Orientation};

/// How node indices past `n` are treated when placing leaders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Indices beyond `n` are dropped (paths, stars).
    Open,
    /// Indices wrap modulo `n` (rings).
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    /// Leaders evenly spaced inside each block, the first at the block start.
    Spread,
    /// Leaders packed contiguously from the block start.
    Clustered,
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Placement::Spread => "spread",
            Placement::Clustered => "clustered",
        })
    }
}

impl FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spread" => Ok(Placement::Spread),
            "clustered" | "cluster" => Ok(Placement::Clustered),
            other => Err(Error::InvalidPattern(format!("unknown placement '{other}'"))),
        }
    }
}

/// Consecutive blocks of `block_length` nodes, each with
/// `leaders_per_block` leaders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockScheme {
    pub block_length: usize,
    pub leaders_per_block: usize,
    pub placement: Placement,
}

impl BlockScheme {
    pub fn new(block_length: usize, leaders_per_block: usize, placement: Placement) -> Result<Self> {
        if block_length == 0 || leaders_per_block == 0 || leaders_per_block > block_length {
            return Err(Error::InvalidPattern(format!(
                "need 1 <= leaders_per_block ({leaders_per_block}) <= block_length ({block_length})"
            )));
        }
        Ok(BlockScheme { block_length, leaders_per_block, placement })
    }

    fn offsets(&self) -> Vec<usize> {
        let (len, m) = (self.block_length, self.leaders_per_block);
        match self.placement {
            Placement::Spread => (0..m).map(|j| j * len / m).collect(),
            Placement::Clustered => (0..m).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LeaderPattern {
    All,
    /// 1-indexed node labels.
    Explicit(BTreeSet<usize>),
    /// `ceil(f n)` leaders spaced `ceil(1/f)` apart starting at `phase`
    /// (1-indexed).
    UniformFraction {
        fraction: f64,
        phase: usize,
    },
    Blocks(BlockScheme),
}

impl LeaderPattern {
    pub fn explicit(nodes: impl IntoIterator<Item = usize>) -> Self {
        LeaderPattern::Explicit(nodes.into_iter().collect())
    }
}

impl fmt::Display for LeaderPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeaderPattern::All => f.write_str("all"),
            LeaderPattern::Explicit(set) => {
                let items: Vec<String> = set.iter().map(usize::to_string).collect();
                write!(f, "explicit:{}", items.join(","))
            }
            LeaderPattern::UniformFraction { fraction, phase } => write!(f, "fraction:{fraction}:{phase}"),
            LeaderPattern::Blocks(b) => {
                write!(f, "blocks:{}:{}:{}", b.block_length, b.leaders_per_block, b.placement)
            }
        }
    }
}

/// Parses `all`, `explicit:1,3,5`, `fraction:<f>[:phase]` (with `f` a
/// decimal or `p/q`) and `blocks:<length>:<per_block>[:spread|clustered]`.
impl FromStr for LeaderPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidPattern(format!("'{s}': {msg}"));
        let parse_usize = |v: &str| v.trim().parse::<usize>().map_err(|_| bad("expected an integer"));
        let mut parts = s.trim().split(':');
        match parts.next().unwrap_or("") {
            "all" => Ok(LeaderPattern::All),
            "explicit" => {
                let list = parts.next().ok_or_else(|| bad("missing node list"))?;
                let nodes = list
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(parse_usize)
                    .collect::<Result<BTreeSet<_>>>()?;
                Ok(LeaderPattern::Explicit(nodes))
            }
            "fraction" => {
                let f = parts.next().ok_or_else(|| bad("missing fraction"))?;
                let fraction = match f.split_once('/') {
                    Some((p, q)) => parse_usize(p)? as f64 / parse_usize(q)? as f64,
                    None => f.trim().parse::<f64>().map_err(|_| bad("expected a number"))?,
                };
                let phase = parts.next().map(parse_usize).transpose()?.unwrap_or(1);
                Ok(LeaderPattern::UniformFraction { fraction, phase })
            }
            "blocks" => {
                let len = parse_usize(parts.next().ok_or_else(|| bad("missing block length"))?)?;
                let per = parse_usize(parts.next().ok_or_else(|| bad("missing leaders per block"))?)?;
                let placement = parts.next().map(str::parse).transpose()?.unwrap_or(Placement::Spread);
                Ok(LeaderPattern::Blocks(BlockScheme::new(len, per, placement)?))
            }
            other => Err(bad(&format!("unknown pattern kind '{other}'"))),
        }
    }
}

/// Sorted 0-indexed leader nodes for a network of `n` nodes.
pub fn leader_nodes(p: &LeaderPattern, n: usize, boundary: Boundary) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::InvalidPattern("network has no nodes".into()));
    }
    let mut chosen = vec![false; n];
    match p {
        LeaderPattern::All => chosen.iter_mut().for_each(|c| *c = true),
        LeaderPattern::Explicit(set) => {
            for &node in set {
                if !(1..=n).contains(&node) {
                    return Err(Error::InvalidPattern(format!("leader {node} not in 1..={n}")));
                }
                chosen[node - 1] = true;
            }
        }
        &LeaderPattern::UniformFraction { fraction, phase } => {
            if !(fraction > 0.0 && fraction <= 1.0) {
                return Err(Error::InvalidPattern(format!("fraction {fraction} not in (0, 1]")));
            }
            if !(1..=n).contains(&phase) {
                return Err(Error::InvalidPattern(format!("phase {phase} not in 1..={n}")));
            }
            let count = (fraction * n as f64).ceil() as usize;
            let spacing = (1.0 / fraction).ceil() as usize;
            for k in 0..count {
                let pos = phase - 1 + k * spacing;
                match boundary {
                    Boundary::Open if pos >= n => break,
                    Boundary::Open => chosen[pos] = true,
                    Boundary::Periodic => {
                        // On a collision take the next free node downstream.
                        let mut pos = pos % n;
                        while chosen[pos] {
                            pos = (pos + 1) % n;
                        }
                        chosen[pos] = true;
                    }
                }
            }
        }
        LeaderPattern::Blocks(scheme) => {
            if boundary == Boundary::Periodic && !n.is_multiple_of(scheme.block_length) {
                return Err(Error::InvalidPattern(format!(
                    "block length {} does not divide ring size {n}",
                    scheme.block_length
                )));
            }
            if scheme.block_length > n {
                return Err(Error::InvalidPattern(format!(
                    "block length {} exceeds network size {n}",
                    scheme.block_length
                )));
            }
            let offsets = scheme.offsets();
            for start in (0..n).step_by(scheme.block_length) {
                for off in &offsets {
                    if start + off < n {
                        chosen[start + off] = true;
                    }
                }
            }
        }
    }
    Ok((0..n).filter(|&i| chosen[i]).collect())
}

/// Diagonal 0/1 input matrix selecting the pattern's leaders.
pub fn build_leader_matrix(p: &LeaderPattern, n: usize, boundary: Boundary) -> Result<Matrix> {
    let mut diag = vec![0.0; n];
    for i in leader_nodes(p, n, boundary)? {
        diag[i] = 1.0;
    }
    Matrix::from_diagonal(&diag)
}

fn check_leader_diagonal(b: &Matrix, n: usize) -> Result<Vec<f64>> {
    if b.rows() != n || b.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} input matrix"),
            got: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    let diag = b.diagonal();
    if !b.is_diagonal() || diag.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::InvalidPattern("input matrix must be diagonal with 0/1 entries".into()));
    }
    Ok(diag)
}

/// Gramian of the directed star `A_s / gamma` (centre -> periphery).
pub fn star_gramian_closed_form(n: usize, gamma: f64, b: &Matrix) -> Result<Matrix> {
    let bound = ((n.max(1) - 1) as f64).sqrt();
    if !(gamma > bound) {
        return Err(Error::InvalidGamma { gamma, bound });
    }
    let diag = check_leader_diagonal(b, n)?;
    let g11 = diag[0];
    let coupling = g11 / (gamma * gamma);
    let mut g = Matrix::zeros(n, n);
    g[(0, 0)] = g11;
    for i in 1..n {
        for j in 1..n {
            g[(i, j)] = if i == j { coupling + diag[i] } else { coupling };
        }
    }
    Ok(g)
}

/// Diagonal Gramian of the directed path `A_p / gamma`:
/// `G_ii = sum_{k<=i} gamma^(2(k-i)) B_kk`.
pub fn path_gramian_closed_form(n: usize, gamma: f64, b: &Matrix) -> Result<Matrix> {
    if !(gamma > 1.0) {
        return Err(Error::InvalidGamma { gamma, bound: 1.0 });
    }
    let diag = check_leader_diagonal(b, n)?;
    let decay = 1.0 / (gamma * gamma);
    // Horner-style recursion: G_ii = B_ii + gamma^-2 G_(i-1)(i-1).
    let mut entries = Vec::with_capacity(n);
    let mut prev = 0.0;
    for &bkk in &diag {
        prev = bkk + decay * prev;
        entries.push(prev);
    }
    Matrix::from_diagonal(&entries)
}

/// Lower bound `gamma^(-2/f)` on the least Gramian eigenvalue of a
/// directed path with a uniformly spread leader fraction `f`.
pub fn path_lambda_min_lower_bound(fraction: f64, gamma: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidPattern(format!("fraction {fraction} not in (0, 1]")));
    }
    if !(gamma > 1.0) {
        return Err(Error::InvalidGamma { gamma, bound: 1.0 });
    }
    Ok(gamma.powf(-2.0 / fraction))
}

/// Whether a directed star with these (1-indexed) leaders is controllable:
/// the centre plus all but at most one peripheral node.
pub fn star_controllability_predicate(n: usize, leaders: &BTreeSet<usize>) -> bool {
    let peripheral = leaders.iter().filter(|&&v| (2..=n).contains(&v)).count();
    leaders.contains(&1) && peripheral + 2 >= n
}

/// One evaluated leader configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub leaders: usize,
    pub block_length: usize,
    pub leaders_per_block: usize,
    pub placement: Placement,
    pub lambda_min: f64,
    /// `+inf` when the Gramian is not positive definite.
    pub kappa: f64,
}

impl SweepRow {
    pub fn fraction(&self) -> f64 {
        self.leaders as f64 / self.n as f64
    }

    /// `leaders / n` in lowest terms, e.g. `1/20`.
    pub fn fraction_label(&self) -> String {
        let g = self.leaders.gcd(&self.n).max(1);
        let (p, q) = (self.leaders / g, self.n / g);
        if q == 1 {
            p.to_string()
        } else {
            format!("{p}/{q}")
        }
    }
}

/// The first `count` divisors of `n`, ascending.
pub fn divisors(n: usize, count: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).take(count).collect()
}

/// One spread leader per block, block length over the first `count`
/// divisors of `n`.
pub fn block_length_regime(n: usize, count: usize) -> Vec<BlockScheme> {
    divisors(n, count)
        .into_iter()
        .map(|len| BlockScheme { block_length: len, leaders_per_block: 1, placement: Placement::Spread })
        .collect()
}

/// Fixed block length with `1..=block_length` leaders clustered at each
/// block start.
pub fn leaders_per_block_regime(block_length: usize) -> Vec<BlockScheme> {
    (1..=block_length)
        .map(|m| BlockScheme { block_length, leaders_per_block: m, placement: Placement::Clustered })
        .collect()
}

/// Evaluates each block scheme on the directed ring of size `n` scaled by
/// `1/gamma`. Rows come back in the order of `configs`.
pub fn ring_leader_sweep(n: usize, gamma: f64, configs: &[BlockScheme]) -> Result<Vec<SweepRow>> {
    let spec = GraphSpec::new(Family::Ring, Orientation::Directed, n)?;
    // sigma_1 of the directed ring is exactly 1.
    if !(gamma > 1.0) {
        return Err(Error::InvalidGamma { gamma, bound: 1.0 });
    }
    for c in configs {
        if !n.is_multiple_of(c.block_length) {
            return Err(Error::InvalidPattern(format!(
                "block length {} does not divide ring size {n}",
                c.block_length
            )));
        }
    }
    let a_scaled = scale_adjacency(&build_adjacency(&spec), gamma)?;
    let base = ControlSystem::from_parts(a_scaled, Matrix::identity(n), gamma)?;

    let evaluate = |scheme: &BlockScheme| -> Result<SweepRow> {
        let b = build_leader_matrix(&LeaderPattern::Blocks(*scheme), n, Boundary::Periodic)?;
        let sys = base.with_input_matrix(b)?;
        let analysis = compute_gramian(&sys, GramianMode::Exact)?;
        Ok(SweepRow {
            n,
            leaders: sys.leader_count(),
            block_length: scheme.block_length,
            leaders_per_block: scheme.leaders_per_block,
            placement: scheme.placement,
            lambda_min: analysis.lambda_min,
            kappa: analysis.kappa,
        })
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        configs.par_iter().map(evaluate).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        configs.iter().map(evaluate).collect()
    }
}
