//! Browser bindings for the netgram demo page. Every export returns a JSON
//! string; non-finite numbers (an infinite condition number) become `null`.

use netgram::bounds::size_sweep_row;
use netgram::gramian::{compute_gramian, system_for_spec, GramianMode};
use netgram::graphs::{choose_gamma, Family, FamilyKind, Orientation};
use netgram::leaders::{
    block_length_regime, leaders_per_block_regime, ring_leader_sweep, BlockScheme, LeaderPattern, Placement, SweepRow,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest network the size sweep accepts.
pub const MAX_SWEEP_N: usize = 400;
/// Largest ring the leader sweep accepts.
pub const MAX_RING_N: usize = 2000;
/// Largest Gramian sent to the heatmap.
pub const MAX_HEATMAP_N: usize = 120;

const AUTO_GAMMA_MARGIN: f64 = 1.05;

#[derive(Serialize)]
struct SizeSweep {
    family: String,
    gamma: f64,
    rows: Vec<SizePoint>,
}

#[derive(Serialize)]
struct SizePoint {
    n: usize,
    kappa: f64,
    lambda_min: f64,
    bound_eq4: f64,
    bound_family: f64,
    bound_theorem2: f64,
}

#[derive(Serialize)]
struct LeaderPoint {
    regime: &'static str,
    fraction: f64,
    fraction_label: String,
    block_length: usize,
    leaders_per_block: usize,
    placement: String,
    lambda_min: f64,
    kappa: f64,
}

#[derive(Serialize)]
struct Heatmap {
    n: usize,
    gamma: f64,
    leaders: String,
    entries: Vec<f64>,
    eigenvalues: Vec<f64>,
    kappa: f64,
    lambda_min: f64,
    positive_definite: bool,
}

fn kind(family: &str, directed: bool) -> Result<FamilyKind, String> {
    let family: Family = family.parse().map_err(|e: netgram::Error| e.to_string())?;
    let orientation = if directed { Orientation::Directed } else { Orientation::Undirected };
    FamilyKind::new(family, orientation).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Condition number and bounds for sizes `n_min..=n_max` in steps of `step`.
/// A non-positive `gamma` selects one that keeps the largest size stable.
pub fn size_sweep_json(
    family: &str,
    directed: bool,
    n_min: usize,
    n_max: usize,
    step: usize,
    gamma: f64,
) -> Result<String, String> {
    let kind = kind(family, directed)?;
    if step == 0 || n_min > n_max {
        return Err(format!("empty size range {n_min}..{n_max} step {step}"));
    }
    if n_max > MAX_SWEEP_N {
        return Err(format!("sizes above {MAX_SWEEP_N} are too slow for the browser"));
    }
    let gamma =
        if gamma > 0.0 { gamma } else { choose_gamma(kind, n_max, AUTO_GAMMA_MARGIN).map_err(|e| e.to_string())? };
    let rows = (n_min.max(kind.family.min_size())..=n_max)
        .step_by(step)
        .map(|n| {
            let spec = kind.with_size(n).map_err(|e| e.to_string())?;
            let r = size_sweep_row(&spec, gamma).map_err(|e| e.to_string())?;
            Ok(SizePoint {
                n,
                kappa: r.kappa,
                lambda_min: r.lambda_min,
                bound_eq4: r.bound_eq4,
                bound_family: r.bound_family,
                bound_theorem2: r.bound_theorem2,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    to_json(&SizeSweep { family: label(kind), gamma, rows })
}

fn label(kind: FamilyKind) -> String {
    let dir = if kind.is_directed() { "directed" } else { "undirected" };
    format!("{dir} {}", kind.family.name())
}

fn leader_point(regime: &'static str, r: &SweepRow) -> LeaderPoint {
    LeaderPoint {
        regime,
        fraction: r.fraction(),
        fraction_label: r.fraction_label(),
        block_length: r.block_length,
        leaders_per_block: r.leaders_per_block,
        placement: r.placement.to_string(),
        lambda_min: r.lambda_min,
        kappa: r.kappa,
    }
}

/// Block leader placements on a directed ring of `n` nodes: block length
/// over the first `divisors` divisors of `n`, leaders per block at fixed
/// `block_length`, and spread vs. clustered at fraction `1/block_length`.
pub fn leader_sweep_json(n: usize, gamma: f64, divisors: usize, block_length: usize) -> Result<String, String> {
    if n > MAX_RING_N {
        return Err(format!("rings above {MAX_RING_N} nodes are too slow for the browser"));
    }
    if block_length == 0 || !n.is_multiple_of(block_length) {
        return Err(format!("block length {block_length} does not divide {n}"));
    }
    let sweep = |regime: &'static str, configs: &[BlockScheme]| -> Result<Vec<LeaderPoint>, String> {
        let rows = ring_leader_sweep(n, gamma, configs).map_err(|e| e.to_string())?;
        Ok(rows.iter().map(|r| leader_point(regime, r)).collect())
    };
    let compare = [
        BlockScheme::new(block_length, 1, Placement::Spread),
        BlockScheme::new(n, n / block_length, Placement::Clustered),
    ]
    .into_iter()
    .collect::<Result<Vec<_>, _>>()
    .map_err(|e| e.to_string())?;

    let mut points = sweep("block-length", &block_length_regime(n, divisors))?;
    points.extend(sweep("leaders-per-block", &leaders_per_block_regime(block_length))?);
    points.extend(sweep("compare", &compare)?);
    to_json(&points)
}

/// Gramian entries (row-major) and eigenvalues for one network.
pub fn gramian_json(family: &str, directed: bool, n: usize, gamma: f64, leaders: &str) -> Result<String, String> {
    if n > MAX_HEATMAP_N {
        return Err(format!("heatmaps are limited to {MAX_HEATMAP_N} nodes"));
    }
    let kind = kind(family, directed)?;
    let spec = kind.with_size(n).map_err(|e| e.to_string())?;
    let pattern: LeaderPattern = leaders.parse().map_err(|e: netgram::Error| e.to_string())?;
    let gamma =
        if gamma > 0.0 { gamma } else { choose_gamma(kind, n, AUTO_GAMMA_MARGIN).map_err(|e| e.to_string())? };
    let sys = system_for_spec(&spec, gamma, &pattern).map_err(|e| e.to_string())?;
    let g = compute_gramian(&sys, GramianMode::Exact).map_err(|e| e.to_string())?;
    to_json(&Heatmap {
        n,
        gamma,
        leaders: pattern.to_string(),
        entries: g.gramian.as_slice().to_vec(),
        eigenvalues: g.eigenvalues.values().to_vec(),
        kappa: g.kappa,
        lambda_min: g.lambda_min,
        positive_definite: g.positive_definite,
    })
}

#[wasm_bindgen(js_name = sizeSweep)]
pub fn size_sweep(
    family: &str,
    directed: bool,
    n_min: usize,
    n_max: usize,
    step: usize,
    gamma: f64,
) -> Result<String, JsError> {
    size_sweep_json(family, directed, n_min, n_max, step, gamma).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = leaderSweep)]
pub fn leader_sweep(n: usize, gamma: f64, divisors: usize, block_length: usize) -> Result<String, JsError> {
    leader_sweep_json(n, gamma, divisors, block_length).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gramian(family: &str, directed: bool, n: usize, gamma: f64, leaders: &str) -> Result<String, JsError> {
    gramian_json(family, directed, n, gamma, leaders).map_err(|e| JsError::new(&e))
}
