//! Recovery-theory bounds for the k-support norm, Monte Carlo checks of the
//! unit-ball width, and the synthetic regression setup used by the experiments.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::admm::admm_solve_from;
use crate::error::{GdsError, Result};
use crate::model::{build_problem, AdmmConfig, AdmmState, LinearModelInstance};
use crate::norms::{ksup_dual_norm, KSupportNorm};

fn check_pk(p: usize, k: usize) -> Result<()> {
    if k == 0 || k > p {
        return Err(GdsError::param("k", format!("need 1 <= k <= p, got k = {k}, p = {p}")));
    }
    Ok(())
}

/// `sqrt(2k log(pe/k)) + sqrt(k)`, the bound on `E[R*(g)]` for the k-support norm.
pub fn width_unit_ball_bound(p: usize, k: usize) -> Result<f64> {
    check_pk(p, k)?;
    let (p, k) = (p as f64, k as f64);
    Ok((2.0 * k * (p.ln() - k.ln() + 1.0)).sqrt() + k.sqrt())
}

/// `sqrt(n) * (sqrt(2k log(pe/k)) + sqrt(k))`.
pub fn lambda_bound(n: usize, p: usize, k: usize) -> Result<f64> {
    if n == 0 {
        return Err(GdsError::param("n", "must be at least 1"));
    }
    Ok((n as f64).sqrt() * width_unit_ball_bound(p, k)?)
}

/// Square root of the bound on the squared width of the error cone,
/// `(sqrt(2k log(p - k - ceil(s/k) + 2)) + sqrt(k))^2 ceil(s/k) + s`.
pub fn width_error_cone_bound(p: usize, k: usize, s: usize) -> Result<f64> {
    check_pk(p, k)?;
    if s == 0 {
        return Err(GdsError::param("s", "must be at least 1"));
    }
    let groups = s.div_ceil(k);
    if p + 2 < k + groups + 2 {
        return Err(GdsError::param(
            "s",
            format!("p - k - ceil(s/k) + 2 must be at least 2 (p = {p}, k = {k}, s = {s})"),
        ));
    }
    let inner = (p + 2 - k - groups) as f64;
    let kf = k as f64;
    let term = (2.0 * kf * inner.ln()).sqrt() + kf.sqrt();
    Ok((term * term * groups as f64 + s as f64).sqrt())
}

/// All three bounds for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryBounds {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub s: usize,
    pub lambda_bound: f64,
    pub width_unit_ball_bound: f64,
    pub width_error_cone_bound_sq: f64,
}

impl TheoryBounds {
    pub fn new(n: usize, p: usize, k: usize, s: usize) -> Result<Self> {
        let cone = width_error_cone_bound(p, k, s)?;
        Ok(Self {
            n,
            p,
            k,
            s,
            lambda_bound: lambda_bound(n, p, k)?,
            width_unit_ball_bound: width_unit_ball_bound(p, k)?,
            width_error_cone_bound_sq: cone * cone,
        })
    }
}

/// Expected Euclidean length of a standard Gaussian vector in `n` dimensions,
/// `sqrt(2) Gamma((n+1)/2) / Gamma(n/2)`.
pub fn expected_gaussian_length(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(GdsError::param("n", "must be at least 1"));
    }
    let n = n as f64;
    Ok(std::f64::consts::SQRT_2 * (ln_gamma((n + 1.0) / 2.0) - ln_gamma(n / 2.0)).exp())
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Monte Carlo estimate of `E[R*(g)]`, the top-k L2 norm of a standard Gaussian vector.
///
/// Uses a ChaCha8 stream seeded with `seed`; normals come from the ziggurat
/// sampler of `rand_distr`.
pub fn mc_expected_dual_norm(p: usize, k: usize, trials: usize, seed: u64) -> Result<MonteCarloEstimate> {
    check_pk(p, k)?;
    if trials < 100 {
        return Err(GdsError::param("trials", format!("need at least 100, got {trials}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = vec![0.0; p];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        for gi in g.iter_mut() {
            *gi = StandardNormal.sample(&mut rng);
        }
        let d = ksup_dual_norm(&g, k)?;
        sum += d;
        sum_sq += d * d;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var / t).sqrt(),
        trials,
    })
}

/// Outcome of checking one `(p, k)` pair against the unit-ball width bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub p: usize,
    pub k: usize,
    pub estimate: MonteCarloEstimate,
    pub bound: f64,
    /// `bound - mean`; positive when the bound holds.
    pub margin: f64,
    /// For `k = p`: whether the mean lies within 3 standard errors of
    /// `(p / sqrt(p+1), sqrt(p))`.
    pub length_bracket: Option<bool>,
    pub passed: bool,
}

pub fn check_width_bound(p: usize, k: usize, trials: usize, seed: u64) -> Result<BoundCheck> {
    let estimate = mc_expected_dual_norm(p, k, trials, seed)?;
    let bound = width_unit_ball_bound(p, k)?;
    let length_bracket = (k == p).then(|| {
        let pf = p as f64;
        let slack = 3.0 * estimate.std_error;
        estimate.mean > pf / (pf + 1.0).sqrt() - slack && estimate.mean < pf.sqrt() + slack
    });
    let margin = bound - estimate.mean;
    Ok(BoundCheck {
        p,
        k,
        estimate,
        bound,
        margin,
        length_bracket,
        passed: margin > 0.0 && length_bracket.unwrap_or(true),
    })
}

/// A block of coefficients sharing one value; indices are zero-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSpec {
    pub indices: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticConfig {
    pub p: usize,
    pub n: usize,
    pub groups: Vec<GroupSpec>,
    pub noise_scale: f64,
    pub normalize_columns: bool,
    /// Give each group's columns a common random mean.
    pub shared_group_means: bool,
    pub seed: u64,
}

impl SyntheticConfig {
    /// `p = 600`, three consecutive groups of ten coefficients equal to 10,
    /// noise scale 0.01.
    pub fn reference(n: usize, seed: u64) -> Self {
        Self {
            p: 600,
            n,
            groups: (0..3)
                .map(|g| GroupSpec {
                    indices: (g * 10..g * 10 + 10).collect(),
                    value: 10.0,
                })
                .collect(),
            noise_scale: 0.01,
            normalize_columns: true,
            shared_group_means: true,
            seed,
        }
    }

    /// Groups of `size` consecutive coefficients starting at zero.
    pub fn consecutive_groups(count: usize, size: usize, value: f64) -> Vec<GroupSpec> {
        (0..count)
            .map(|g| GroupSpec {
                indices: (g * size..(g + 1) * size).collect(),
                value,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub theta_star: DVector<f64>,
    pub seed: u64,
    pub noise_scale: f64,
}

impl SyntheticDataset {
    pub fn instance(&self) -> Result<LinearModelInstance> {
        LinearModelInstance::new(self.x.clone(), self.y.clone())
    }

    pub fn support(&self) -> BTreeSet<usize> {
        support_of(self.theta_star.as_slice(), 0.0)
    }
}

/// Draws a design whose grouped columns share a mean.
///
/// Each group receives one mean `m ~ N(0, 1)`; entries in its columns are
/// `m + N(0, 1)`, all other entries are `N(0, 1)`. With
/// `shared_group_means` off every entry is `N(0, 1)`. Columns are then scaled
/// to unit L2 norm (unless disabled) and `y = X theta* + noise_scale * N(0, I)`.
pub fn generate_synthetic(config: &SyntheticConfig) -> Result<SyntheticDataset> {
    let SyntheticConfig { p, n, .. } = *config;
    if p == 0 || n == 0 {
        return Err(GdsError::param("n, p", "must both be positive"));
    }
    if !(config.noise_scale >= 0.0 && config.noise_scale.is_finite()) {
        return Err(GdsError::param("noise_scale", "must be finite and nonnegative"));
    }
    let mut theta_star = DVector::zeros(p);
    let mut group_of = vec![None; p];
    for (g, spec) in config.groups.iter().enumerate() {
        for &i in &spec.indices {
            if i >= p {
                return Err(GdsError::param("groups", format!("index {i} out of range for p = {p}")));
            }
            if group_of[i].is_some() {
                return Err(GdsError::param("groups", format!("index {i} appears in more than one group")));
            }
            group_of[i] = Some(g);
            theta_star[i] = spec.value;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let means: Vec<f64> = config
        .groups
        .iter()
        .map(|_| {
            let m: f64 = StandardNormal.sample(&mut rng);
            if config.shared_group_means { m } else { 0.0 }
        })
        .collect();
    let mut x = DMatrix::zeros(n, p);
    for j in 0..p {
        let shift = group_of[j].map_or(0.0, |g| means[g]);
        let mut col = x.column_mut(j);
        for v in col.iter_mut() {
            let e: f64 = StandardNormal.sample(&mut rng);
            *v = shift + e;
        }
        if config.normalize_columns {
            let norm = col.norm();
            if norm > 0.0 {
                col /= norm;
            }
        }
    }
    let mut y = &x * &theta_star;
    for yi in y.iter_mut() {
        let e: f64 = StandardNormal.sample(&mut rng);
        *yi += config.noise_scale * e;
    }
    Ok(SyntheticDataset {
        x,
        y,
        theta_star,
        seed: config.seed,
        noise_scale: config.noise_scale,
    })
}

/// Indices with `|theta_i| > eps`.
pub fn support_of(theta: &[f64], eps: f64) -> BTreeSet<usize> {
    theta
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > eps)
        .map(|(i, _)| i)
        .collect()
}

/// `(tpr, fpr)` of an estimated support against the truth over `p` coordinates.
pub fn tpr_fpr(estimated: &BTreeSet<usize>, truth: &BTreeSet<usize>, p: usize) -> (f64, f64) {
    let tp = estimated.intersection(truth).count();
    let fp = estimated.len() - tp;
    let negatives = p - truth.len();
    let tpr = if truth.is_empty() { 0.0 } else { tp as f64 / truth.len() as f64 };
    let fpr = if negatives == 0 { 0.0 } else { fp as f64 / negatives as f64 };
    (tpr, fpr)
}

/// Threshold used to read a support off an estimate: `1e-3 * max|theta|`.
pub fn default_support_eps(theta: &[f64]) -> f64 {
    1e-3 * theta.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// How a point's estimate relates to solver outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIters,
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub lambda: f64,
    pub tpr: f64,
    pub fpr: f64,
    pub l2_error: f64,
    pub iters: usize,
    pub status: SolveStatus,
}

/// Support-threshold rule for [`roc_and_error`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SupportEps {
    /// `1e-3 * max|theta_hat|` for each estimate.
    Relative,
    Absolute(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub support_eps: SupportEps,
    pub warm_start: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            support_eps: SupportEps::Relative,
            warm_start: true,
        }
    }
}

/// Solves the k-support GDS for every `lambda` on a grid and scores each estimate.
///
/// Points are solved from the largest `lambda` down, each warm-started from
/// the previous solution, and returned in grid order. A divergent solve is
/// reported with status [`SolveStatus::Diverged`] and the sweep restarts the
/// next point from zero.
pub fn roc_and_error(
    dataset: &SyntheticDataset,
    k: usize,
    lambda_grid: &[f64],
    options: SweepOptions,
    config: &AdmmConfig,
) -> Result<Vec<RocPoint>> {
    if lambda_grid.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(GdsError::param("lambda_grid", "values must be positive and finite"));
    }
    let ascending = lambda_grid.windows(2).all(|w| w[0] <= w[1]);
    let descending = lambda_grid.windows(2).all(|w| w[0] >= w[1]);
    if !(ascending || descending) {
        return Err(GdsError::param("lambda_grid", "must be sorted"));
    }
    let norm = KSupportNorm::new(k)?;
    let instance = dataset.instance()?;
    let base = build_problem(&instance, lambda_grid.first().copied().unwrap_or(1.0))?;
    let truth = dataset.support();
    let p = instance.p();

    let mut order: Vec<usize> = (0..lambda_grid.len()).collect();
    order.sort_by(|&a, &b| lambda_grid[b].total_cmp(&lambda_grid[a]));
    let mut out: Vec<Option<RocPoint>> = vec![None; lambda_grid.len()];
    let mut warm: Option<AdmmState> = None;
    for idx in order {
        let lambda = lambda_grid[idx];
        let problem = base.with_lambda(lambda)?;
        let start = if options.warm_start { warm.as_ref() } else { None };
        let point = match admm_solve_from(&problem, &norm, config, start) {
            Ok(res) => {
                let theta = res.theta_hat.as_slice();
                let eps = match options.support_eps {
                    SupportEps::Relative => default_support_eps(theta),
                    SupportEps::Absolute(e) => e,
                };
                let (tpr, fpr) = tpr_fpr(&support_of(theta, eps), &truth, p);
                let l2_error = (&res.theta_hat - &dataset.theta_star).norm();
                let status = if res.converged {
                    SolveStatus::Converged
                } else {
                    SolveStatus::MaxIters
                };
                let iters = res.iters_used;
                warm = Some(res.final_state);
                RocPoint {
                    lambda,
                    tpr,
                    fpr,
                    l2_error,
                    iters,
                    status,
                }
            }
            Err(GdsError::Divergence { iteration }) => {
                log::warn!("solver diverged at lambda = {lambda:e} (iteration {iteration})");
                warm = None;
                RocPoint {
                    lambda,
                    tpr: f64::NAN,
                    fpr: f64::NAN,
                    l2_error: f64::NAN,
                    iters: iteration,
                    status: SolveStatus::Diverged,
                }
            }
            Err(e) => return Err(e),
        };
        out[idx] = Some(point);
    }
    Ok(out.into_iter().flatten().collect())
}

/// `count` points spaced evenly in log10 between `lo` and `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(GdsError::param("grid", format!("need 0 < lo <= hi, got [{lo}, {hi}]")));
    }
    if count < 2 {
        return Ok(vec![lo; count]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..count)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values evaluated at 50 significant digits.
    #[test]
    fn bound_formulas_match_high_precision() {
        let cases = [
            (lambda_bound(400, 600, 10).unwrap(), 265.12362654907991261),
            (lambda_bound(1, 4, 4).unwrap(), 4.8284271247461900976),
            (lambda_bound(100, 100, 1).unwrap(), 43.481846382743265218),
            (width_unit_ball_bound(100, 5).unwrap(), 8.5572484634169502439),
            (width_unit_ball_bound(600, 50).unwrap(), 25.738972487505964249),
            (width_error_cone_bound(100, 1, 1).unwrap(), 4.1569278186560767054),
            (width_error_cone_bound(600, 10, 30).unwrap(), 25.632128033835494532),
            (width_error_cone_bound(200, 1, 5).unwrap(), 9.7607119595698075363),
        ];
        for (got, want) in cases {
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn full_k_lambda_bound_reduces() {
        for (n, p) in [(1, 4), (9, 25), (400, 600)] {
            let expect = (n as f64).sqrt() * (p as f64).sqrt() * (2f64.sqrt() + 1.0);
            assert_relative_eq!(lambda_bound(n, p, p).unwrap(), expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn bound_domain_errors() {
        assert!(lambda_bound(0, 10, 1).is_err());
        assert!(lambda_bound(10, 10, 0).is_err());
        assert!(lambda_bound(10, 10, 11).is_err());
        assert!(width_error_cone_bound(10, 1, 0).is_err());
        // p - k - ceil(s/k) + 2 = 1
        assert!(width_error_cone_bound(10, 1, 10).is_err());
        assert!(width_error_cone_bound(10, 1, 9).is_ok());
    }

    #[test]
    fn error_cone_bound_monotone_in_s() {
        let mut prev = 0.0;
        for s in 1..=300 {
            let v = width_error_cone_bound(600, 10, s).unwrap();
            assert!(v.is_finite() && v >= prev);
            prev = v;
        }
    }

    #[test]
    fn l1_cone_bound_tracks_sparse_rate() {
        for (p, s) in [(1000, 1), (10_000, 5), (100_000, 10), (1_000_000, 20)] {
            let ours = width_error_cone_bound(p, 1, s).unwrap().powi(2);
            let (pf, sf) = (p as f64, s as f64);
            let classic = 2.0 * sf * (pf / sf).ln() + 1.25 * sf;
            let ratio = ours / classic;
            assert!((0.5..=2.0).contains(&ratio), "p={p} s={s} ratio={ratio}");
        }
    }

    #[test]
    fn gaussian_length_values_and_bracket() {
        let known = [
            (1, 0.79788456080286535588),
            (2, 1.2533141373155002512),
            (10, 3.0843277597998638995),
            (600, 24.484693351291187999),
        ];
        for (n, v) in known {
            assert_relative_eq!(expected_gaussian_length(n).unwrap(), v, max_relative = 1e-12);
        }
        for n in 1..500 {
            let l = expected_gaussian_length(n).unwrap();
            let nf = n as f64;
            assert!(nf / (nf + 1.0).sqrt() < l && l < nf.sqrt());
        }
    }

    #[test]
    fn mc_max_of_two_folded_normals() {
        let est = mc_expected_dual_norm(2, 1, 20_000, 5).unwrap();
        let truth = 2.0 / std::f64::consts::PI.sqrt();
        assert!((est.mean - truth).abs() < 3.0 * est.std_error, "{est:?}");
        assert!(mc_expected_dual_norm(2, 1, 99, 5).is_err());
    }

    #[test]
    fn mc_full_k_is_expected_length() {
        let est = mc_expected_dual_norm(50, 50, 5000, 11).unwrap();
        let l = expected_gaussian_length(50).unwrap();
        assert!((est.mean - l).abs() < 3.0 * est.std_error);
        assert_eq!(check_width_bound(50, 50, 5000, 11).unwrap().length_bracket, Some(true));
    }

    #[test]
    fn synthetic_columns_and_determinism() {
        let cfg = SyntheticConfig {
            n: 40,
            ..SyntheticConfig::reference(40, 3)
        };
        let a = generate_synthetic(&cfg).unwrap();
        let b = generate_synthetic(&cfg).unwrap();
        assert_eq!(a, b);
        for j in 0..cfg.p {
            assert!((a.x.column(j).norm() - 1.0).abs() < 1e-10);
        }
        assert_eq!(a.support().len(), 30);
        assert_eq!(a.theta_star.iter().filter(|v| **v == 10.0).count(), 30);
    }

    #[test]
    fn synthetic_noiseless_and_unnormalized() {
        let mut cfg = SyntheticConfig::reference(25, 9);
        cfg.noise_scale = 0.0;
        cfg.normalize_columns = false;
        let d = generate_synthetic(&cfg).unwrap();
        assert_eq!(d.y, &d.x * &d.theta_star);
        assert!(d.x.column(0).norm() != 1.0);
    }

    #[test]
    fn synthetic_rejects_overlap() {
        let mut cfg = SyntheticConfig::reference(10, 1);
        cfg.groups[1].indices.push(0);
        assert!(matches!(
            generate_synthetic(&cfg),
            Err(GdsError::InvalidParameter { name: "groups", .. })
        ));
        cfg.groups[1].indices.pop();
        cfg.groups[0].indices.push(600);
        assert!(generate_synthetic(&cfg).is_err());
    }

    #[test]
    fn rates_for_trivial_estimates() {
        let truth: BTreeSet<usize> = [0, 1, 2].into();
        assert_eq!(tpr_fpr(&truth, &truth, 10), (1.0, 0.0));
        assert_eq!(tpr_fpr(&BTreeSet::new(), &truth, 10), (0.0, 0.0));
        let all: BTreeSet<usize> = (0..10).collect();
        assert_eq!(tpr_fpr(&all, &truth, 10), (1.0, 1.0));
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-2, 1e3, 6).unwrap();
        assert_eq!(g.len(), 6);
        assert_relative_eq!(g[0], 1e-2, max_relative = 1e-14);
        assert_relative_eq!(g[5], 1e3, max_relative = 1e-12);
        assert_relative_eq!(g[2], 1.0, max_relative = 1e-12);
        assert!(log_grid(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn small_sweep_shapes() {
        let cfg = SyntheticConfig {
            p: 40,
            n: 60,
            groups: SyntheticConfig::consecutive_groups(2, 3, 5.0),
            noise_scale: 0.01,
            normalize_columns: true,
            shared_group_means: true,
            seed: 21,
        };
        let d = generate_synthetic(&cfg).unwrap();
        let grid = log_grid(1e-2, 1e2, 9).unwrap();
        let admm = AdmmConfig {
            max_iters: 5000,
            ..AdmmConfig::default()
        };
        let pts = roc_and_error(&d, 3, &grid, SweepOptions::default(), &admm).unwrap();
        assert_eq!(pts.len(), grid.len());
        for (pt, l) in pts.iter().zip(&grid) {
            assert_eq!(pt.lambda, *l);
            assert!((0.0..=1.0).contains(&pt.tpr) && (0.0..=1.0).contains(&pt.fpr));
        }
        // the largest lambda leaves the origin feasible
        let u = d.x.transpose() * &d.y;
        if ksup_dual_norm(u.as_slice(), 3).unwrap() <= 1e2 {
            assert_eq!(pts.last().unwrap().tpr, 0.0);
        }
        assert!(roc_and_error(&d, 3, &[1.0, 0.5, 2.0], SweepOptions::default(), &admm).is_err());
    }
}
