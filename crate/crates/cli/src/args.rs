use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "gds", version, about = "Generalized Dantzig selector: solver and synthetic experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance from design and response files.
    Solve(SolveArgs),
    /// Time the naive and binary-search k-support projections.
    BenchProx(BenchArgs),
    /// TPR/FPR and L2 error along a lambda grid on the synthetic design.
    Roc(RocArgs),
    /// L2 error against the number of samples.
    ErrorVsN(ErrorArgs),
    /// L2 error against k.
    ErrorVsK(ErrorArgs),
    /// Monte Carlo check of the Gaussian-width bound of the k-support unit ball.
    ValidateBounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormName {
    L1,
    Ksup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

impl FromStr for NormName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <NormName as ValueEnum>::from_str(s, true)
    }
}

/// `auto` or a positive number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuArg {
    Auto,
    Value(f64),
}

impl FromStr for MuArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(MuArg::Auto);
        }
        s.parse::<f64>()
            .map(MuArg::Value)
            .map_err(|_| format!("expected `auto` or a number, got {s:?}"))
    }
}

/// Comma-separated integers; `a-b` expands to a range and `a-b:s` to a stepped range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<usize>);

impl FromStr for IntList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || format!("bad list item {item:?}");
            let (range, step) = match item.split_once(':') {
                Some((r, st)) => (r, st.parse::<usize>().map_err(|_| bad())?),
                None => (item, 1),
            };
            if step == 0 {
                return Err(bad());
            }
            match range.split_once('-') {
                Some((a, b)) => {
                    let a: usize = a.trim().parse().map_err(|_| bad())?;
                    let b: usize = b.trim().parse().map_err(|_| bad())?;
                    if a > b {
                        return Err(bad());
                    }
                    out.extend((a..=b).step_by(step));
                }
                None => out.push(range.parse().map_err(|_| bad())?),
            }
        }
        if out.is_empty() {
            return Err("empty list".into());
        }
        Ok(IntList(out))
    }
}

/// Comma-separated `p:k` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairList(pub Vec<(usize, usize)>);

impl FromStr for PairList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let pairs = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|item| {
                let (p, k) = item.split_once(':').ok_or_else(|| format!("expected p:k, got {item:?}"))?;
                Ok((
                    p.trim().parse().map_err(|_| format!("bad p in {item:?}"))?,
                    k.trim().parse().map_err(|_| format!("bad k in {item:?}"))?,
                ))
            })
            .collect::<Result<Vec<_>, String>>()?;
        if pairs.is_empty() {
            return Err("empty list".into());
        }
        Ok(PairList(pairs))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    /// ADMM penalty parameter.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Linearization parameter, or `auto` for 1.01 * 2 * rho(A)^2.
    #[arg(long)]
    pub mu: Option<MuArg>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub tol_primal: Option<f64>,
    #[arg(long)]
    pub tol_change: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputFlags {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Also render a static SVG plot to this path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// JSON file of defaults keyed by flag name; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base seed (falls back to the config file, then GDS_SEED).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Design matrix X, one row per line.
    #[arg(long)]
    pub design: Option<PathBuf>,
    /// Response vector y.
    #[arg(long)]
    pub response: Option<PathBuf>,
    #[arg(long)]
    pub norm: Option<NormName>,
    /// k for the k-support norm.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Fail instead of warning when X^T X is not numerically PSD or mu is too small.
    #[arg(long)]
    pub strict_psd: bool,
    /// Estimate file (one value per line); standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON run report; defaults to `<out>.report.json` when --out is given.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Dimensions to time.
    #[arg(long)]
    pub p: Option<IntList>,
    /// p / k ratios.
    #[arg(long)]
    pub ratio: Option<IntList>,
    /// Random vectors per configuration.
    #[arg(long)]
    pub reps: Option<usize>,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentFlags {
    #[command(flatten)]
    pub solver: SolverFlags,
    #[command(flatten)]
    pub output: OutputFlags,
    /// Fixed constraint radius; defaults to the noise-calibrated theory value per k.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Solve every point from zero.
    #[arg(long)]
    pub no_warm_start: bool,
    /// Keep raw design columns instead of scaling them to unit length.
    #[arg(long)]
    pub no_normalize_columns: bool,
    /// Noise standard deviation.
    #[arg(long)]
    pub noise: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RocArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<IntList>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub lambda_points: Option<usize>,
    /// Absolute support threshold; defaults to 1e-3 * max|theta| per estimate.
    #[arg(long)]
    pub support_eps: Option<f64>,
    #[command(flatten)]
    pub common: ExperimentFlags,
}

#[derive(Debug, Clone, Args)]
pub struct ErrorArgs {
    /// Sample sizes (a single value for error-vs-k).
    #[arg(long)]
    pub n: Option<IntList>,
    #[arg(long)]
    pub k: Option<IntList>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[command(flatten)]
    pub common: ExperimentFlags,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// `p:k` pairs.
    #[arg(long)]
    pub pairs: Option<PairList>,
    /// Monte Carlo trials per pair.
    #[arg(long)]
    pub reps: Option<usize>,
    #[command(flatten)]
    pub output: OutputFlags,
}
