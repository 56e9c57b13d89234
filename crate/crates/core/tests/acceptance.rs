//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` cannot hold as stated; they are still
//! evaluated and reported as FAIL, but do not fail the run unless
//! `ACCEPTANCE_STRICT` is set. A known failure that starts passing does fail
//! the run so the list stays honest.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use netgram::bounds::{lemma1_bounds, printed_family_bound, theorem1_bound};
use netgram::densela::{solve_dlyap, Matrix, DEFAULT_TOL};
use netgram::gramian::{
    compute_gramian, least_norm_input, make_system, min_energy, sigma1, simulate, system_for_spec, ControlSystem,
    GramianMode, Horizon,
};
use netgram::graphs::{choose_gamma, Family, FamilyKind, GraphSpec, Orientation};
use netgram::leaders::{
    block_length_regime, path_lambda_min_lower_bound, ring_leader_sweep, star_controllability_predicate, BlockScheme,
    Boundary, LeaderPattern, Placement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: &[u32] = &[5];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    Matrix::new(n, n, (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

/// Random system with `sigma_1(A)` drawn from `s1_range` and the given leaders.
fn random_system(
    rng: &mut ChaCha8Rng,
    n: usize,
    s1_range: std::ops::Range<f64>,
    leaders: &LeaderPattern,
) -> ControlSystem {
    loop {
        let a = random_matrix(rng, n);
        let s = sigma1(&a).unwrap();
        if s == 0.0 {
            continue;
        }
        let gamma = s / rng.gen_range(s1_range.clone());
        return make_system(&a, gamma, leaders, Boundary::Open).unwrap();
    }
}

fn random_leaders(rng: &mut ChaCha8Rng, n: usize) -> LeaderPattern {
    let mut set: BTreeSet<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
    if set.is_empty() {
        set.insert(rng.gen_range(1..=n));
    }
    LeaderPattern::Explicit(set)
}

/// Truncated series `sum_{tau<=200} A^tau B B^T (A^T)^tau` on plain vectors.
fn series_oracle(a: &Matrix, b: &Matrix) -> Vec<f64> {
    let n = a.rows();
    let a = a.as_slice();
    let b = b.as_slice();
    let mut term = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            term[i * n + j] = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum();
        }
    }
    let mut sum = term.clone();
    for _ in 0..200 {
        let mut at = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                at[i * n + j] = (0..n).map(|k| a[i * n + k] * term[k * n + j]).sum();
            }
        }
        for i in 0..n {
            for j in 0..n {
                term[i * n + j] = (0..n).map(|k| at[i * n + k] * a[j * n + k]).sum();
            }
        }
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
    }
    sum
}

fn c1_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=20);
        let leaders = random_leaders(&mut rng, n);
        let sys = random_system(&mut rng, n, 0.05..0.85, &leaders);
        let q = sys.b().matmul(&sys.b().transpose()).unwrap();
        let g = solve_dlyap(sys.a_scaled(), &q, DEFAULT_TOL).unwrap();
        let oracle = series_oracle(sys.a_scaled(), sys.b());
        let diff: f64 = g.as_slice().iter().zip(&oracle).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = oracle.iter().map(|x| x * x).sum::<f64>().sqrt();
        worst = worst.max(diff / norm);
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && elapsed < Duration::from_secs(30),
        format!("worst relative Frobenius error {worst:.2e}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn c2_eigenvalue_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=20);
        let leaders = random_leaders(&mut rng, n);
        let sys = random_system(&mut rng, n, 0.05..0.95, &leaders);
        let eig = compute_gramian(&sys, GramianMode::Exact).unwrap().eigenvalues;
        let sandwich = lemma1_bounds(&sys).unwrap();
        for (&alpha, &(lo, hi)) in eig.values().iter().zip(&sandwich) {
            let slack = 1e-9 * hi.abs().max(1.0);
            if alpha < lo - slack || alpha > hi + slack {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("{violations} violations over 100 systems"))
}

fn c3_condition_bound_families() -> Outcome {
    let mut violations = 0;
    let mut below_one = 0;
    let mut checked = 0;
    for kind in FamilyKind::all() {
        let gamma = choose_gamma(kind, 60, 1.05).unwrap();
        for n in 3..=60 {
            let spec = kind.with_size(n).unwrap();
            let sys = system_for_spec(&spec, gamma, &LeaderPattern::All).unwrap();
            let report = theorem1_bound(sys.a_scaled()).unwrap();
            checked += 1;
            if !report.satisfied {
                violations += 1;
            }
            if report.measured_value < 1.0 - 1e-12 {
                below_one += 1;
            }
        }
    }
    outcome(
        violations == 0 && below_one == 0,
        format!("{checked} networks, {violations} bound violations, {below_one} with kappa < 1"),
    )
}

fn kappa_of(family: Family, orientation: Orientation, n: usize, gamma: f64) -> f64 {
    let spec = GraphSpec::new(family, orientation, n).unwrap();
    let sys = system_for_spec(&spec, gamma, &LeaderPattern::All).unwrap();
    compute_gramian(&sys, GramianMode::Exact).unwrap().kappa
}

fn c4_directed_ring() -> Outcome {
    let worst =
        (3..=50).map(|n| (kappa_of(Family::Ring, Orientation::Directed, n, 2.0) - 1.0).abs()).fold(0.0, f64::max);
    outcome(worst <= 1e-9, format!("max |kappa - 1| = {worst:.2e}"))
}

fn c5_directed_path() -> Outcome {
    let gamma: f64 = 2.0;
    let target = gamma * gamma / (gamma * gamma - 1.0);
    let failing: Vec<usize> =
        (2..=50).filter(|&n| (kappa_of(Family::Path, Orientation::Directed, n, gamma) - target).abs() > 1e-9).collect();
    let detail = match (failing.first(), failing.last()) {
        (Some(lo), Some(hi)) => format!(
            "{} of 49 sizes miss 4/3 by more than 1e-9 (N = {lo}..{hi}); kappa(2) = {}",
            failing.len(),
            kappa_of(Family::Path, Orientation::Directed, 2, gamma)
        ),
        _ => "all sizes within 1e-9".to_string(),
    };
    outcome(failing.is_empty(), detail)
}

fn c6_path_asymptote() -> Outcome {
    let gamma: f64 = 4.0;
    let limit = gamma * gamma / (gamma * gamma - 4.0);
    let bound = |n: usize| {
        let spec = GraphSpec::new(Family::Path, Orientation::Undirected, n).unwrap();
        printed_family_bound(&spec, gamma).unwrap()
    };
    let at_200 = bound(200);
    let within = rel_err(at_200, limit) < 0.01;
    let below = (2..=200).all(|n| bound(n) < limit);
    let rising = (2..=200).step_by(2).collect::<Vec<_>>().windows(2).all(|w| bound(w[0]) < bound(w[1]));
    outcome(
        within && below && rising,
        format!(
            "bound(200) = {at_200:.10}, gap {:.2e}; below limit: {below}; even N increasing: {rising}",
            rel_err(at_200, limit)
        ),
    )
}

fn c7_star_divergence() -> Outcome {
    let gamma = 1.05 * 99f64.sqrt();
    let kappas: Vec<f64> =
        (5..=100).step_by(5).map(|n| kappa_of(Family::Star, Orientation::Undirected, n, gamma)).collect();
    let increasing = kappas.windows(2).all(|w| w[1] > w[0]);
    let ratio = kappas[kappas.len() - 1] / kappas[0];
    outcome(increasing && ratio > 5.0, format!("strictly increasing: {increasing}, kappa(100)/kappa(5) = {ratio:.3}"))
}

fn c8_path_leaders() -> Outcome {
    let mut root_worst = 0.0f64;
    for gamma in [1.5, 2.0, 4.0] {
        for n in 2..=30 {
            let spec = GraphSpec::new(Family::Path, Orientation::Directed, n).unwrap();
            let sys = system_for_spec(&spec, gamma, &LeaderPattern::explicit([1])).unwrap();
            let lambda_min = compute_gramian(&sys, GramianMode::Exact).unwrap().lambda_min;
            root_worst = root_worst.max(rel_err(lambda_min, gamma.powi(2 * (1 - n as i32))));
        }
    }
    let mut violations = 0;
    let mut checked = 0;
    for gamma in [1.5, 2.0, 4.0] {
        for fraction in [0.5, 0.25, 0.2] {
            let floor = path_lambda_min_lower_bound(fraction, gamma).unwrap();
            for n in 2..=200 {
                let spec = GraphSpec::new(Family::Path, Orientation::Directed, n).unwrap();
                let pattern = LeaderPattern::UniformFraction { fraction, phase: 1 };
                let sys = system_for_spec(&spec, gamma, &pattern).unwrap();
                let lambda_min = compute_gramian(&sys, GramianMode::Exact).unwrap().lambda_min;
                checked += 1;
                if lambda_min < floor * (1.0 - 1e-12) {
                    violations += 1;
                }
            }
        }
    }
    outcome(
        root_worst <= 1e-9 && violations == 0,
        format!("root-only max rel error {root_worst:.2e}; fraction floor: {violations}/{checked} violations"),
    )
}

fn c9_star_predicate() -> Outcome {
    let start = Instant::now();
    let gamma = 4.0;
    let mut disagreements = 0;
    let mut subsets = 0;
    for n in 2..=7 {
        let spec = GraphSpec::new(Family::Star, Orientation::Directed, n).unwrap();
        for mask in 1u32..(1 << n) {
            let leaders: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            let sys = system_for_spec(&spec, gamma, &LeaderPattern::Explicit(leaders.clone())).unwrap();
            let pd = compute_gramian(&sys, GramianMode::Exact).unwrap().positive_definite;
            subsets += 1;
            if pd != star_controllability_predicate(n, &leaders) {
                disagreements += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        disagreements == 0 && elapsed < Duration::from_secs(60),
        format!("{disagreements} disagreements over {subsets} leader sets, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn c10_ring_blocks() -> Outcome {
    let start = Instant::now();
    let n = 800;
    let rows = ring_leader_sweep(n, 2.0, &block_length_regime(n, 11)).unwrap();
    let lengths: Vec<usize> = rows.iter().map(|r| r.block_length).collect();
    let non_increasing = rows.windows(2).all(|w| w[1].lambda_min <= w[0].lambda_min);

    let spread = BlockScheme::new(20, 1, Placement::Spread).unwrap();
    let clustered = BlockScheme::new(n, n / 20, Placement::Clustered).unwrap();
    let pair = ring_leader_sweep(n, 2.0, &[spread, clustered]).unwrap();
    let spread_wins = pair[0].lambda_min > pair[1].lambda_min;
    let elapsed = start.elapsed();
    outcome(
        rows.len() == 11 && non_increasing && spread_wins && elapsed < Duration::from_secs(600),
        format!(
            "block lengths {lengths:?}, non-increasing: {non_increasing}; at 1/20 spread {:.3e} vs clustered {:.3e}; {:.2}s",
            pair[0].lambda_min,
            pair[1].lambda_min,
            elapsed.as_secs_f64()
        ),
    )
}

fn c11_steering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_state = 0.0f64;
    let mut worst_energy = 0.0f64;
    let mut partial = 0;
    for trial in 0..50 {
        let n = rng.gen_range(1..=15);
        let sys = random_system(&mut rng, n, 0.1..0.9, &LeaderPattern::All);
        let x_des: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // Every fifth target uses a random leader subset when that subset is
        // controllable within n steps.
        let subset = random_leaders(&mut rng, n);
        let (state, energy) = match (trial % 5 == 4).then(|| steer_with(&sys, &subset, &x_des, n)) {
            Some(Some(errors)) => {
                partial += 1;
                errors
            }
            _ => steer(&sys, &x_des, rng.gen_range(1..=20)).unwrap(),
        };
        worst_state = worst_state.max(state);
        worst_energy = worst_energy.max(energy);
    }
    outcome(
        worst_state <= 1e-8 && worst_energy <= 1e-8,
        format!(
            "max relative state error {worst_state:.2e}, max relative energy error {worst_energy:.2e} \
             ({partial} partial leader sets)"
        ),
    )
}

fn steer_with(sys: &ControlSystem, leaders: &LeaderPattern, x_des: &[f64], steps: usize) -> Option<(f64, f64)> {
    let b = netgram::leaders::build_leader_matrix(leaders, sys.dim(), Boundary::Open).ok()?;
    let sys = sys.with_input_matrix(b).ok()?;
    let g = compute_gramian(&sys, GramianMode::Series { t_max: steps - 1 }).ok()?;
    if !g.positive_definite {
        return None;
    }
    steer(&sys, x_des, steps).ok()
}

/// Relative state and energy errors of the least-norm input.
fn steer(sys: &ControlSystem, x_des: &[f64], steps: usize) -> netgram::Result<(f64, f64)> {
    let inputs = least_norm_input(sys, x_des, steps)?;
    let reached = simulate(sys, &vec![0.0; x_des.len()], &inputs)?;
    let miss: f64 = reached.iter().zip(x_des).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = x_des.iter().map(|v| v * v).sum::<f64>().sqrt();
    let realized: f64 = inputs.iter().flatten().map(|v| v * v).sum();
    let expected = min_energy(sys, x_des, Horizon::Steps(steps))?;
    Ok((miss / norm, rel_err(realized, expected)))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "oracle equivalence", c1_oracle_equivalence),
        (2, "eigenvalue sandwich", c2_eigenvalue_sandwich),
        (3, "condition bound across families", c3_condition_bound_families),
        (4, "directed ring kappa = 1", c4_directed_ring),
        (5, "directed path kappa = g^2/(g^2-1)", c5_directed_path),
        (6, "path asymptote", c6_path_asymptote),
        (7, "star divergence", c7_star_divergence),
        (8, "path leader formulas", c8_path_leaders),
        (9, "star leader predicate", c9_star_predicate),
        (10, "ring block leaders", c10_ring_blocks),
        (11, "steering identity", c11_steering),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let strict = std::env::var_os("ACCEPTANCE_STRICT").is_some();

    let mut unexpected = 0;
    for (id, name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == id.to_string()) {
            continue;
        }
        let result = check();
        let known = KNOWN_FAILURES.contains(&id);
        let status = if result.pass { "PASS" } else { "FAIL" };
        let note = if known && !result.pass { " [known failure]" } else { "" };
        println!("criterion {id:>2} {status} {name}: {}{note}", result.detail);
        if result.pass == known || (strict && !result.pass) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria did not match expectations");
        std::process::exit(1);
    }
}
