//! Seeded experiment drivers: projection timing, ROC sweeps, and L2 error
//! against sample size and against k. Each driver reports rows through a
//! callback as they are produced and also returns them.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::admm::admm_solve_from;
use crate::error::{GdsError, Result};
use crate::ksup_prox::{project_dual_ball_fast, project_dual_ball_naive};
use crate::model::{build_problem, AdmmConfig, AdmmState};
use crate::norms::{ksup_dual_norm, KSupportNorm};
use crate::stats::{
    self, check_width_bound, generate_synthetic, lambda_bound, width_unit_ball_bound, BoundCheck, SolveStatus,
    SupportEps, SweepOptions, SyntheticConfig,
};

/// Largest disagreement tolerated between the two projection routes.
pub const AGREEMENT_TOL: f64 = 1e-10;

/// Seed for repetition `rep` of a run seeded with `seed`.
pub fn rep_seed(seed: u64, rep: usize) -> u64 {
    seed.wrapping_add(rep as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub p: usize,
    pub k: usize,
    pub method: &'static str,
    pub mean_ns: f64,
    pub sd_ns: f64,
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

/// Times the naive and binary-search projections on `reps` Gaussian vectors
/// per `(p, k = p / ratio)`, rescaled so the top-k norm is twice the radius.
///
/// Fails with [`GdsError::ProjectionMismatch`] (carrying the vector) if the two
/// projections ever differ by more than [`AGREEMENT_TOL`].
pub fn bench_prox(
    p_list: &[usize],
    ratios: &[usize],
    reps: usize,
    seed: u64,
    mut on_row: impl FnMut(&BenchRow),
) -> Result<Vec<BenchRow>> {
    if reps == 0 {
        return Err(GdsError::param("reps", "must be at least 1"));
    }
    let lambda = 1.0;
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &p in p_list {
        for &ratio in ratios {
            if ratio == 0 || p / ratio == 0 {
                return Err(GdsError::param("ratio", format!("p / ratio must be at least 1 (p = {p}, ratio = {ratio})")));
            }
            let k = p / ratio;
            let mut naive_ns = Vec::with_capacity(reps);
            let mut fast_ns = Vec::with_capacity(reps);
            for _ in 0..reps {
                let mut x: Vec<f64> = (0..p).map(|_| StandardNormal.sample(&mut rng)).collect();
                let scale = 2.0 * lambda / ksup_dual_norm(&x, k)?;
                x.iter_mut().for_each(|v| *v *= scale);

                let t = Instant::now();
                let a = project_dual_ball_naive(&x, k, lambda)?;
                naive_ns.push(t.elapsed().as_nanos() as f64);
                let t = Instant::now();
                let b = project_dual_ball_fast(&x, k, lambda)?;
                fast_ns.push(t.elapsed().as_nanos() as f64);

                let deviation = a.iter().zip(&b).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
                if !(deviation <= AGREEMENT_TOL) {
                    return Err(GdsError::ProjectionMismatch {
                        k,
                        lambda,
                        deviation,
                        x,
                    });
                }
            }
            for (method, times) in [("naive", &naive_ns), ("fast", &fast_ns)] {
                let (mean_ns, sd_ns) = mean_sd(times);
                let row = BenchRow {
                    p,
                    k,
                    method,
                    mean_ns,
                    sd_ns,
                };
                on_row(&row);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// How the constraint radius is chosen for each solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LambdaRule {
    /// `noise_scale * sqrt(n) * (sqrt(2k log(pe/k)) + sqrt(k))`, with the
    /// `sqrt(n)` dropped when columns are normalized to unit length.
    Theory,
    Fixed(f64),
}

impl LambdaRule {
    pub fn resolve(&self, n: usize, p: usize, k: usize, noise_scale: f64, normalized: bool) -> Result<f64> {
        match *self {
            LambdaRule::Fixed(l) => Ok(l),
            LambdaRule::Theory if normalized => Ok(noise_scale * width_unit_ball_bound(p, k)?),
            LambdaRule::Theory => Ok(noise_scale * lambda_bound(n, p, k)?),
        }
    }
}

/// Shared knobs of the regression experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSettings {
    pub admm: AdmmConfig,
    pub lambda: LambdaRule,
    pub warm_start: bool,
    pub normalize_columns: bool,
    pub noise_scale: f64,
}

impl Default for ExperimentSettings {
    fn default() -> Self {
        Self {
            admm: experiment_admm_config(),
            lambda: LambdaRule::Theory,
            warm_start: true,
            normalize_columns: true,
            noise_scale: 0.01,
        }
    }
}

/// Solver settings for the experiment grids: looser stopping thresholds and
/// a 2000-iteration cap, enough for the L2 error to settle to three digits.
pub fn experiment_admm_config() -> AdmmConfig {
    AdmmConfig {
        tol_primal: 1e-4,
        tol_change: 1e-5,
        max_iters: 2000,
        ..AdmmConfig::default()
    }
}

fn dataset_config(n: usize, seed: u64, settings: &ExperimentSettings) -> SyntheticConfig {
    SyntheticConfig {
        noise_scale: settings.noise_scale,
        normalize_columns: settings.normalize_columns,
        ..SyntheticConfig::reference(n, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocRow {
    pub k: usize,
    pub seed: u64,
    pub lambda: f64,
    pub tpr: f64,
    pub fpr: f64,
    pub l2_error: f64,
    pub iters: usize,
    pub status: SolveStatus,
}

/// ROC sweep on one reference-configuration dataset of `n` samples for each `k`.
pub fn roc_experiment(
    n: usize,
    ks: &[usize],
    lambda_grid: &[f64],
    seed: u64,
    settings: &ExperimentSettings,
    support_eps: SupportEps,
    mut on_row: impl FnMut(&RocRow),
) -> Result<Vec<RocRow>> {
    let data = generate_synthetic(&dataset_config(n, seed, settings))?;
    let options = SweepOptions {
        support_eps,
        warm_start: settings.warm_start,
    };
    let mut rows = Vec::new();
    for &k in ks {
        for pt in stats::roc_and_error(&data, k, lambda_grid, options, &settings.admm)? {
            let row = RocRow {
                k,
                seed,
                lambda: pt.lambda,
                tpr: pt.tpr,
                fpr: pt.fpr,
                l2_error: pt.l2_error,
                iters: pt.iters,
                status: pt.status,
            };
            on_row(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    pub n: usize,
    pub k: usize,
    pub rep: usize,
    pub seed: u64,
    pub lambda: f64,
    pub l2_error: f64,
    pub iters: usize,
    pub status: SolveStatus,
}

/// Solves one dataset for each `k` in order, optionally warm-starting each
/// solve from the previous one.
fn sweep_k(
    n: usize,
    ks: &[usize],
    rep: usize,
    seed: u64,
    settings: &ExperimentSettings,
    on_row: &mut impl FnMut(&ErrorRow),
    rows: &mut Vec<ErrorRow>,
) -> Result<()> {
    let cfg = dataset_config(n, seed, settings);
    let data = generate_synthetic(&cfg)?;
    let base = build_problem(&data.instance()?, 0.0)?;
    let mut warm: Option<AdmmState> = None;
    for &k in ks {
        let lambda = settings.lambda.resolve(n, cfg.p, k, cfg.noise_scale, cfg.normalize_columns)?;
        let problem = base.with_lambda(lambda)?;
        let norm = KSupportNorm::new(k)?;
        let start = if settings.warm_start { warm.as_ref() } else { None };
        let row = match admm_solve_from(&problem, &norm, &settings.admm, start) {
            Ok(res) => {
                let row = ErrorRow {
                    n,
                    k,
                    rep,
                    seed,
                    lambda,
                    l2_error: (&res.theta_hat - &data.theta_star).norm(),
                    iters: res.iters_used,
                    status: if res.converged {
                        SolveStatus::Converged
                    } else {
                        SolveStatus::MaxIters
                    },
                };
                warm = Some(res.final_state);
                row
            }
            Err(GdsError::Divergence { iteration }) => {
                warm = None;
                ErrorRow {
                    n,
                    k,
                    rep,
                    seed,
                    lambda,
                    l2_error: f64::NAN,
                    iters: iteration,
                    status: SolveStatus::Diverged,
                }
            }
            Err(e) => return Err(e),
        };
        on_row(&row);
        rows.push(row);
    }
    Ok(())
}

/// L2 error over a grid of sample sizes. Repetition `r` uses the same seed
/// for every `n`.
pub fn error_vs_n(
    ns: &[usize],
    ks: &[usize],
    reps: usize,
    seed: u64,
    settings: &ExperimentSettings,
    mut on_row: impl FnMut(&ErrorRow),
) -> Result<Vec<ErrorRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        for rep in 0..reps {
            sweep_k(n, ks, rep, rep_seed(seed, rep), settings, &mut on_row, &mut rows)?;
        }
    }
    Ok(rows)
}

/// L2 error over a grid of `k` at fixed `n`, one dataset per repetition.
pub fn error_vs_k(
    n: usize,
    ks: &[usize],
    reps: usize,
    seed: u64,
    settings: &ExperimentSettings,
    mut on_row: impl FnMut(&ErrorRow),
) -> Result<Vec<ErrorRow>> {
    let mut rows = Vec::new();
    for rep in 0..reps {
        sweep_k(n, ks, rep, rep_seed(seed, rep), settings, &mut on_row, &mut rows)?;
    }
    Ok(rows)
}

/// Mean and spread of the L2 error for one `(n, k)` cell; diverged solves are
/// counted but left out of the statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorSummary {
    pub n: usize,
    pub k: usize,
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
    pub diverged: usize,
}

pub fn summarize_errors(rows: &[ErrorRow]) -> Vec<ErrorSummary> {
    let mut keys: Vec<(usize, usize)> = rows.iter().map(|r| (r.n, r.k)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(n, k)| {
            let cell: Vec<&ErrorRow> = rows.iter().filter(|r| r.n == n && r.k == k).collect();
            let errs: Vec<f64> = cell.iter().map(|r| r.l2_error).filter(|e| e.is_finite()).collect();
            let (mean, sd) = mean_sd(&errs);
            ErrorSummary {
                n,
                k,
                mean,
                sd,
                count: errs.len(),
                diverged: cell.len() - errs.len(),
            }
        })
        .collect()
}

/// Monte Carlo check of the unit-ball width bound for each `(p, k)`.
pub fn validate_bounds(pairs: &[(usize, usize)], trials: usize, seed: u64) -> Result<Vec<BoundCheck>> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, &(p, k))| check_width_bound(p, k, trials, rep_seed(seed, i)))
        .collect()
}
