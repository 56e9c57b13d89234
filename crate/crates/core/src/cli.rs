//! Command-line front end. Every command writes CSV with a header row.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{
    family_bound, lemma1_bounds, printed_family_report, schur_bound, size_sweep_row, theorem1_bound, theorem2_bound,
    BoundDirection, BoundReport,
};
use crate::csv::{fmt_bool, fmt_f64, row};
use crate::densela::{singular_values_squared, Matrix, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::gramian::{
    compute_gramian, least_norm_input, make_system, min_energy, sigma1, simulate, system_for_spec, ControlSystem,
    GramianMode, Horizon, DEFAULT_T_MAX,
};
use crate::graphs::{
    build_adjacency, choose_gamma, local_bound, read_adjacency, write_adjacency, Family, FamilyKind, GraphSpec,
    Orientation,
};
use crate::leaders::{
    block_length_regime, leaders_per_block_regime, ring_leader_sweep, BlockScheme, Boundary, LeaderPattern, Placement,
    SweepRow,
};

/// Margin over the family's sigma_1 supremum when gamma is `auto`.
pub const AUTO_GAMMA_MARGIN: f64 = 1.05;

#[derive(Debug, Parser)]
#[command(name = "netgram", version, about = "Controllability Gramians of single-integrator networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the adjacency file of a canonical graph.
    Gen(GenArgs),
    /// Gramian condition number and least eigenvalue of one network.
    Analyze(AnalyzeArgs),
    /// Every applicable bound next to the quantity it constrains.
    Bounds(NetworkArgs),
    /// Condition number and bounds over a range of sizes.
    SweepSize(SweepSizeArgs),
    /// Block leader placements on a directed ring.
    SweepLeaders(SweepLeadersArgs),
    /// Minimum energy and least-norm input norms for a target state.
    Energy(EnergyArgs),
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long, conflicts_with = "undirected")]
    directed: bool,
    #[arg(long)]
    undirected: bool,
}

impl FamilyArgs {
    fn kind(&self) -> Result<Option<FamilyKind>> {
        let Some(family) = self.family else {
            if self.directed || self.undirected {
                return Err(Error::InvalidSpec("--directed/--undirected need --family".into()));
            }
            return Ok(None);
        };
        let orientation = if self.directed { Orientation::Directed } else { Orientation::Undirected };
        FamilyKind::new(family, orientation).map(Some)
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct NetworkArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: Option<usize>,
    /// Adjacency file instead of a canonical family.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    /// Scale factor, or `auto`.
    #[arg(long, default_value = "auto")]
    gamma: GammaArg,
    /// all | explicit:1,2 | fraction:1/4[:phase] | blocks:L:m[:spread|clustered]
    #[arg(long, default_value = "all")]
    leaders: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Series,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    t_max: usize,
}

#[derive(Debug, Args)]
struct SweepSizeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Sizes: `10`, `5..50`, `5..100:5` or `3,5,8`.
    #[arg(long)]
    n: SizeRange,
    #[arg(long, default_value = "auto")]
    gamma: GammaArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Regime {
    /// One spread leader per block, block length over divisors of n.
    BlockLength,
    /// Fixed block length, leaders clustered at each block start.
    LeadersPerBlock,
    /// One leader per block vs. the same number clustered in one block.
    Compare,
    All,
}

#[derive(Debug, Args)]
struct SweepLeadersArgs {
    #[arg(long, default_value_t = 800)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    #[arg(long, value_enum, default_value = "all")]
    regime: Regime,
    /// Number of divisors of n for the block-length regime.
    #[arg(long, default_value_t = 11)]
    divisors: usize,
    /// Block length for the leaders-per-block and compare regimes.
    #[arg(long, default_value_t = 20)]
    block_length: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct EnergyArgs {
    #[command(flatten)]
    net: NetworkArgs,
    /// Target state: comma-separated values, or `e<k>` for the k-th unit vector.
    #[arg(long)]
    target: String,
    /// Steering horizon in steps.
    #[arg(long)]
    steps: usize,
}

#[derive(Debug, Clone, Copy)]
enum GammaArg {
    Auto,
    Value(f64),
}

impl FromStr for GammaArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(GammaArg::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(GammaArg::Value(v)),
            _ => Err(format!("gamma must be a positive number or 'auto', got '{s}'")),
        }
    }
}

#[derive(Debug, Clone)]
struct SizeRange(Vec<usize>);

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let int = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("bad size '{v}'"));
        let sizes = if let Some((lo, rest)) = s.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (int(hi)?, int(step)?),
                None => (int(rest)?, 1),
            };
            let lo = int(lo)?;
            if step == 0 || lo > hi {
                return Err(format!("empty size range '{s}'"));
            }
            (lo..=hi).step_by(step).collect()
        } else {
            s.split(',').map(int).collect::<std::result::Result<Vec<_>, _>>()?
        };
        if sizes.is_empty() {
            return Err(format!("empty size range '{s}'"));
        }
        Ok(SizeRange(sizes))
    }
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a command, mapped to the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or input; exit code 1.
    Config(String),
    /// Numerical routine failed; exit code 2.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(format!("numerical failure: {e}"))
        } else {
            CliError::Config(format!("error: {e}"))
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and writes
/// CSV to `stdout` or the `--output` file. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            let target: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = target.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((csv, output)) => match write_output(&csv, output, stdout) {
            Ok(()) => 0,
            Err(msg) => {
                let _ = writeln!(stderr, "{msg}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.message());
            e.exit_code()
        }
    }
}

fn write_output(csv: &str, output: Option<&PathBuf>, stdout: &mut dyn Write) -> std::result::Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, csv).map_err(|e| format!("error: writing {}: {e}", path.display())),
        None => stdout.write_all(csv.as_bytes()).map_err(|e| format!("error: writing output: {e}")),
    }
}

fn execute(cmd: &Command) -> CliResult<(String, Option<&PathBuf>)> {
    match cmd {
        Command::Gen(a) => Ok((cmd_gen(a)?, a.out.output.as_ref())),
        Command::Analyze(a) => Ok((cmd_analyze(a)?, a.net.out.output.as_ref())),
        Command::Bounds(a) => Ok((cmd_bounds(a)?, a.out.output.as_ref())),
        Command::SweepSize(a) => Ok((cmd_sweep_size(a)?, a.out.output.as_ref())),
        Command::SweepLeaders(a) => Ok((cmd_sweep_leaders(a)?, a.out.output.as_ref())),
        Command::Energy(a) => Ok((cmd_energy(a)?, a.net.out.output.as_ref())),
    }
}

fn cmd_gen(args: &GenArgs) -> CliResult<String> {
    let kind = args.family.kind()?.ok_or_else(|| CliError::Config("error: gen needs --family".into()))?;
    let spec = kind.with_size(args.n)?;
    Ok(write_adjacency(&build_adjacency(&spec))?)
}

/// A network resolved from flags: matrix, optional family spec, gamma, leaders.
struct Network {
    adjacency: Matrix,
    spec: Option<GraphSpec>,
    gamma: f64,
    leaders: LeaderPattern,
}

impl Network {
    fn from_args(args: &NetworkArgs) -> CliResult<Network> {
        let leaders: LeaderPattern = args.leaders.parse()?;
        let (adjacency, spec) = match (&args.input, args.family.kind()?) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("error: reading {}: {e}", path.display())))?;
                (read_adjacency(&text)?, None)
            }
            (None, Some(kind)) => {
                let n = args.n.ok_or_else(|| CliError::Config("error: --family needs --n".into()))?;
                let spec = kind.with_size(n)?;
                (build_adjacency(&spec), Some(spec))
            }
            (None, None) => return Err(CliError::Config("error: need --family or --input".into())),
        };
        let gamma = match (args.gamma, spec) {
            (GammaArg::Value(g), _) => g,
            (GammaArg::Auto, Some(spec)) => choose_gamma(spec.kind(), spec.size(), AUTO_GAMMA_MARGIN)?,
            (GammaArg::Auto, None) => {
                let s1 = sigma1(&adjacency)?;
                if s1 > 0.0 {
                    AUTO_GAMMA_MARGIN * s1
                } else {
                    1.0
                }
            }
        };
        Ok(Network { adjacency, spec, gamma, leaders })
    }

    fn system(&self, leaders: &LeaderPattern) -> Result<ControlSystem> {
        match &self.spec {
            Some(spec) => system_for_spec(spec, self.gamma, leaders),
            None => make_system(&self.adjacency, self.gamma, leaders, Boundary::Open),
        }
    }

    fn n(&self) -> usize {
        self.adjacency.rows()
    }

    fn family_label(&self) -> String {
        match &self.spec {
            Some(s) => format!("{}-{}", s.orientation(), s.family()),
            None => "input".into(),
        }
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> CliResult<String> {
    let net = Network::from_args(&args.net)?;
    let sys = net.system(&net.leaders)?;
    let mode = match args.mode {
        ModeArg::Exact => GramianMode::Exact,
        ModeArg::Series => GramianMode::Series { t_max: args.t_max },
    };
    let g = compute_gramian(&sys, mode)?;
    let mut out = row(["n", "gamma", "kappa", "lambda_min", "pd"]);
    out += &row([
        net.n().to_string(),
        fmt_f64(net.gamma),
        fmt_f64(g.kappa),
        fmt_f64(g.lambda_min),
        fmt_bool(g.positive_definite).to_string(),
    ]);
    Ok(out)
}

fn bound_row(r: &BoundReport, family: &str, n: usize, gamma: f64, m: f64) -> String {
    let direction = match r.direction {
        BoundDirection::Upper => "upper",
        BoundDirection::Lower => "lower",
    };
    row([
        r.bound_name.clone(),
        direction.to_string(),
        fmt_f64(r.bound_value),
        fmt_f64(r.measured_value),
        fmt_bool(r.satisfied).to_string(),
        family.to_string(),
        n.to_string(),
        fmt_f64(gamma),
        fmt_f64(m),
    ])
}

fn cmd_bounds(args: &NetworkArgs) -> CliResult<String> {
    let net = Network::from_args(args)?;
    let n = net.n();
    let gamma = net.gamma;
    let family = net.family_label();
    let m = local_bound(&net.adjacency).local_bound_m;
    let sys = net.system(&net.leaders)?;

    let mut out =
        row(["bound_name", "direction", "bound_value", "measured_value", "satisfied", "family", "n", "gamma", "m"]);
    let mut push = |r: &BoundReport| out += &bound_row(r, &family, n, gamma, m);

    let eq4 = theorem1_bound(sys.a_scaled())?;
    let kappa = eq4.measured_value;
    push(&eq4);
    if let Some(spec) = &net.spec {
        push(&family_bound(spec, gamma)?);
        push(&printed_family_report(spec, gamma)?);
    }
    let t2 = if gamma > m { theorem2_bound(m, gamma)? } else { f64::INFINITY };
    push(&BoundReport::upper("theorem2", t2, kappa, Default::default()));

    let s1_sq = singular_values_squared(&net.adjacency, DEFAULT_TOL)?.largest().unwrap_or(0.0);
    let schur = schur_bound(&net.adjacency);
    push(&BoundReport::upper("schur", schur.intermediate, s1_sq, Default::default()));
    push(&BoundReport::upper("schur_coarse", schur.coarse, s1_sq, Default::default()));

    let alphas = compute_gramian(&sys, GramianMode::Exact)?.eigenvalues;
    for (i, ((lo, hi), &alpha)) in lemma1_bounds(&sys)?.into_iter().zip(alphas.values()).enumerate() {
        let k = i + 1;
        let lower = BoundReport::new(format!("lemma1_lower_{k}"), BoundDirection::Lower, lo, alpha, Default::default());
        let upper = BoundReport::upper(format!("lemma1_upper_{k}"), hi, alpha, Default::default());
        push(&lower);
        push(&upper);
    }
    Ok(out)
}

fn cmd_sweep_size(args: &SweepSizeArgs) -> CliResult<String> {
    let kind = args.family.kind()?.ok_or_else(|| CliError::Config("error: sweep-size needs --family".into()))?;
    let sizes = &args.n.0;
    let n_max = *sizes.iter().max().expect("non-empty range");
    let gamma = match args.gamma {
        GammaArg::Value(g) => g,
        GammaArg::Auto => choose_gamma(kind, n_max, AUTO_GAMMA_MARGIN)?,
    };
    let specs = sizes.iter().map(|&n| kind.with_size(n)).collect::<Result<Vec<_>>>()?;

    let eval = |spec: &GraphSpec| -> Result<String> {
        let r = size_sweep_row(spec, gamma)?;
        Ok(row([
            r.n.to_string(),
            fmt_f64(r.gamma),
            fmt_f64(r.kappa),
            fmt_f64(r.bound_eq4),
            fmt_f64(r.bound_family),
            fmt_f64(r.bound_theorem2),
            fmt_f64(r.lambda_min),
        ]))
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<String> = {
        use rayon::prelude::*;
        specs.par_iter().map(eval).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<String> = specs.iter().map(eval).collect::<Result<_>>()?;

    let mut out = row(["n", "gamma", "kappa", "bound_eq4", "bound_family", "bound_theorem2", "lambda_min"]);
    rows.iter().for_each(|r| out += r);
    Ok(out)
}

fn cmd_sweep_leaders(args: &SweepLeadersArgs) -> CliResult<String> {
    let n = args.n;
    let mut configs: Vec<(&str, BlockScheme)> = Vec::new();
    if matches!(args.regime, Regime::BlockLength | Regime::All) {
        configs.extend(block_length_regime(n, args.divisors).into_iter().map(|c| ("block-length", c)));
    }
    if matches!(args.regime, Regime::LeadersPerBlock | Regime::All) {
        if !n.is_multiple_of(args.block_length) {
            return Err(CliError::Config(format!("error: block length {} does not divide {n}", args.block_length)));
        }
        configs.extend(leaders_per_block_regime(args.block_length).into_iter().map(|c| ("leaders-per-block", c)));
    }
    if matches!(args.regime, Regime::Compare | Regime::All) {
        let len = args.block_length;
        if len == 0 || !n.is_multiple_of(len) {
            return Err(CliError::Config(format!("error: block length {len} does not divide {n}")));
        }
        configs.push(("compare", BlockScheme::new(len, 1, Placement::Spread)?));
        configs.push(("compare", BlockScheme::new(n, n / len, Placement::Clustered)?));
    }
    let schemes: Vec<BlockScheme> = configs.iter().map(|(_, c)| *c).collect();
    let rows = ring_leader_sweep(n, args.gamma, &schemes)?;

    let mut out = row([
        "regime",
        "n",
        "gamma",
        "fraction",
        "block_length",
        "leaders_per_block",
        "placement",
        "lambda_min",
        "kappa",
    ]);
    for ((regime, _), r) in configs.iter().zip(&rows) {
        out += &sweep_row(regime, args.gamma, r);
    }
    Ok(out)
}

fn sweep_row(regime: &str, gamma: f64, r: &SweepRow) -> String {
    row([
        regime.to_string(),
        r.n.to_string(),
        fmt_f64(gamma),
        r.fraction_label(),
        r.block_length.to_string(),
        r.leaders_per_block.to_string(),
        r.placement.to_string(),
        fmt_f64(r.lambda_min),
        fmt_f64(r.kappa),
    ])
}

fn parse_target(s: &str, n: usize) -> Result<Vec<f64>> {
    if let Some(k) = s.strip_prefix('e') {
        let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad unit target '{s}'")))?;
        if !(1..=n).contains(&k) {
            return Err(Error::Parse(format!("unit target index {k} not in 1..={n}")));
        }
        let mut v = vec![0.0; n];
        v[k - 1] = 1.0;
        return Ok(v);
    }
    let v = s
        .split(',')
        .map(|t| match t.trim().parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(Error::Parse(format!("bad target entry '{t}'"))),
        })
        .collect::<Result<Vec<_>>>()?;
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: format!("{n} target entries"), got: v.len().to_string() });
    }
    Ok(v)
}

fn cmd_energy(args: &EnergyArgs) -> CliResult<String> {
    let net = Network::from_args(&args.net)?;
    let sys = net.system(&net.leaders)?;
    let target = parse_target(&args.target, net.n())?;
    if args.steps == 0 {
        return Err(CliError::Config("error: --steps must be at least 1".into()));
    }
    let energy = min_energy(&sys, &target, Horizon::Steps(args.steps))?;
    let inputs = least_norm_input(&sys, &target, args.steps)?;
    let reached = simulate(&sys, &vec![0.0; net.n()], &inputs)?;
    let miss: f64 = reached.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norms: Vec<f64> = inputs.iter().map(|u| u.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let realized: f64 = norms.iter().map(|v| v * v).sum();

    let mut out = row(["quantity", "step", "value"]);
    out += &row(["min_energy".to_string(), String::new(), fmt_f64(energy)]);
    out += &row(["realized_energy".to_string(), String::new(), fmt_f64(realized)]);
    out += &row(["steering_error".to_string(), String::new(), fmt_f64(miss)]);
    for (t, norm) in norms.iter().enumerate() {
        let _ = write!(out, "{}", row(["input_norm".to_string(), t.to_string(), fmt_f64(*norm)]));
    }
    Ok(out)
}
