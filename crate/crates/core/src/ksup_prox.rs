//! Exact Euclidean projection onto the top-k L2 ball `{v : ||v||_k^{sp*} <= lambda}`.
//!
//! Work happens on `z = |x|` sorted decreasingly. The projection `w` keeps the
//! signs and order of `x` and has the block form
//!
//! ```text
//!   w_i = z_i / (1 + beta)   for i <= s
//!   w_i = level              for s < i <= r
//!   w_i = z_i                for i > r
//! ```
//!
//! with `0 <= s < k <= r <= p` (1-based). For `s > 0`, `beta` is the unique
//! nonnegative root of
//!
//! ```text
//!   (k-s) A_sr^2 [(1+beta) / (r-s+(k-s)beta)]^2 - lambda^2 (1+beta)^2 + B_s = 0,
//! ```
//!
//! `A_sr = sum_{s<i<=r} z_i`, `B_s = sum_{i<=s} z_i^2`, and the level is
//! `A_sr / (r-s+(k-s)beta)` (or `sqrt((lambda^2 - B_s)/(k-s))` when `beta = 0`).
//! A pair is admissible when `w_s > w_k` and `z_{r+1} <= w_k < z_r`; among
//! admissible pairs the one closest to `z` is the projection.
//!
//! Two searches over `(s, r)` are provided: exhaustive enumeration in
//! `O(k (p - k))`, and a nested binary search in `O(log k log(p - k))` that
//! relies on the admissibility conditions being monotone in `r` and in `s`.

use crate::error::{GdsError, Result};
use crate::norms::{check_k, magnitude_order, top_k_l2};

/// Relative slack (times `max |x|`) for the retry pass used when exact
/// comparisons reject every pair, e.g. with ties or zeros in `x`.
pub const TIE_SLACK: f64 = 1e-12;

/// Sorting permutation and signs that map `|x|` sorted decreasingly back to `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignPermutation {
    /// `order[i]` is the index in `x` of the `i`-th largest magnitude.
    pub order: Vec<usize>,
    /// `sign(x_j)` with `sign(0) = 0`.
    pub signs: Vec<f64>,
}

impl SignPermutation {
    pub fn of(x: &[f64]) -> Self {
        let signs = x
            .iter()
            .map(|&v| {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect();
        Self {
            order: magnitude_order(x),
            signs,
        }
    }

    /// `|x|` in the permuted order.
    pub fn sorted_abs(&self, x: &[f64]) -> Vec<f64> {
        self.order.iter().map(|&j| x[j].abs()).collect()
    }

    /// Places `sorted[i]` at `order[i]` with the sign of the original entry.
    pub fn apply(&self, sorted: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; sorted.len()];
        for (i, &j) in self.order.iter().enumerate() {
            out[j] = self.signs[j] * sorted[i];
        }
        out
    }
}

/// A fully materialized `(s, r)` candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionCandidate {
    pub s: usize,
    pub r: usize,
    pub beta: f64,
    pub a_sr: f64,
    pub b_s: f64,
    /// Candidate `|w|` in sorted order.
    pub w_sorted: Vec<f64>,
    /// `|| z - w_sorted ||_2^2`; `+inf` when the candidate is infeasible.
    pub objective: f64,
    /// `w_s > w_k` (vacuous for `s = 0`).
    pub cond_19: bool,
    /// `z_{r+1} <= w_k < z_r` with `z_{p+1} = 0`.
    pub cond_20: bool,
}

impl ProjectionCandidate {
    pub fn admissible(&self) -> bool {
        self.cond_19 && self.cond_20
    }

    /// `w_k`, the common value of the flat block.
    pub fn level(&self, k: usize) -> f64 {
        self.w_sorted[k - 1]
    }
}

/// The `(s, r)` pair picked by a search, with the quantities needed to rebuild `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub s: usize,
    pub r: usize,
    pub beta: f64,
    pub level: f64,
    pub objective: f64,
}

/// One outer step of the binary search: the tried `s`, the matching `r` if any,
/// and whether the candidate was recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStep {
    pub s: usize,
    pub r: Option<usize>,
    pub recorded: bool,
}

fn flat_level(lambda: f64, b_s: f64, k: usize, s: usize) -> f64 {
    ((lambda * lambda - b_s) / (k - s) as f64).sqrt()
}

/// Left-hand side of the quartic in `beta`.
pub fn quartic_residual(beta: f64, s: usize, r: usize, a_sr: f64, b_s: f64, lambda: f64, k: usize) -> f64 {
    let ks = (k - s) as f64;
    let frac = (1.0 + beta) / ((r - s) as f64 + ks * beta);
    ks * a_sr * a_sr * frac * frac - lambda * lambda * (1.0 + beta).powi(2) + b_s
}

/// `Phi_sr(beta) = (beta/(1+beta))^2 B_s + sum_{s<i<=r} (z_i - w_k(beta))^2`, the
/// distance to `z` when the top-k constraint is active. `z` is sorted decreasingly.
pub fn phi_sr(beta: f64, z: &[f64], s: usize, r: usize, k: usize, lambda: f64) -> f64 {
    let b_s: f64 = z[..s].iter().map(|v| v * v).sum();
    let level = ((lambda * lambda - b_s / (1.0 + beta).powi(2)) / (k - s) as f64).sqrt();
    let shrink = beta / (1.0 + beta);
    shrink * shrink * b_s + z[s..r].iter().map(|zi| (zi - level).powi(2)).sum::<f64>()
}

/// Nonnegative root of the quartic for `s > 0`, or `None` if there is none.
///
/// Instead of the quartic itself this brackets the sign change of
/// `g(beta) = (k-s) beta - A_sr / sqrt((lambda^2 - B_s/(1+beta)^2)/(k-s)) + (r-s)`,
/// which is increasing for `beta >= max(0, sqrt(B_s)/lambda - 1)` and has the
/// same nonnegative root. Bisection runs to full precision and is followed by
/// Newton polishing.
pub fn solve_beta(
    s: usize,
    r: usize,
    a_sr: f64,
    b_s: f64,
    lambda: f64,
    k: usize,
) -> Result<Option<f64>> {
    if s == 0 {
        return Err(GdsError::Contract(
            "solve_beta requires s > 0; s = 0 always uses beta = 0".into(),
        ));
    }
    if !(s < k && k <= r) {
        return Err(GdsError::Contract(format!(
            "solve_beta requires 0 < s < k <= r, got s = {s}, k = {k}, r = {r}"
        )));
    }
    if !(lambda > 0.0 && a_sr >= 0.0 && b_s >= 0.0) {
        return Err(GdsError::Contract(format!(
            "solve_beta requires lambda > 0, A >= 0, B >= 0 (got {lambda}, {a_sr}, {b_s})"
        )));
    }
    Ok(solve_beta_unchecked(s, r, a_sr, b_s, lambda, k))
}

fn solve_beta_unchecked(s: usize, r: usize, a: f64, b: f64, lambda: f64, k: usize) -> Option<f64> {
    let ks = (k - s) as f64;
    let rs = (r - s) as f64;
    let lam2 = lambda * lambda;
    let boundary = (b.sqrt() / lambda - 1.0).max(0.0);

    if a == 0.0 {
        // g has no sign change; the quartic reduces to B_s = lambda^2 (1+beta)^2.
        let root = b.sqrt() / lambda - 1.0;
        return (root >= 0.0).then_some(root);
    }

    let g = |beta: f64| {
        let h = (lam2 - b / ((1.0 + beta) * (1.0 + beta))) / ks;
        if h <= 0.0 {
            f64::NEG_INFINITY
        } else {
            ks * beta + rs - a / h.sqrt()
        }
    };
    let dg = |beta: f64| {
        let one = 1.0 + beta;
        let h = (lam2 - b / (one * one)) / ks;
        let dh = 2.0 * b / (ks * one * one * one);
        ks + 0.5 * a * h.powf(-1.5) * dh
    };

    let mut lo = boundary;
    let g_lo = g(lo);
    if g_lo > 0.0 {
        return None;
    }
    if g_lo == 0.0 {
        return Some(lo);
    }
    let mut hi = (2.0 * lo).max(1.0);
    while g(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return None;
        }
    }
    for _ in 0..2100 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut beta = hi;
    let mut g_beta = g(beta);
    for _ in 0..3 {
        let d = dg(beta);
        if !(d.is_finite() && d > 0.0) {
            break;
        }
        let next = beta - g_beta / d;
        if !(next >= boundary) {
            break;
        }
        let g_next = g(next);
        if g_next.abs() < g_beta.abs() {
            beta = next;
            g_beta = g_next;
        } else {
            break;
        }
    }
    Some(beta)
}

/// Prefix sums over `z` (1-based: `sum[i] = z_1 + ... + z_i`).
struct Sorted<'a> {
    z: &'a [f64],
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    k: usize,
    lambda: f64,
}

impl<'a> Sorted<'a> {
    fn new(z: &'a [f64], k: usize, lambda: f64) -> Self {
        let mut sum = Vec::with_capacity(z.len() + 1);
        let mut sum_sq = Vec::with_capacity(z.len() + 1);
        sum.push(0.0);
        sum_sq.push(0.0);
        for &v in z {
            sum.push(sum.last().unwrap() + v);
            sum_sq.push(sum_sq.last().unwrap() + v * v);
        }
        Self {
            z,
            sum,
            sum_sq,
            k,
            lambda,
        }
    }

    fn p(&self) -> usize {
        self.z.len()
    }

    /// 1-based `z_i` with `z_{p+1} = 0`.
    fn at(&self, i: usize) -> f64 {
        if i > self.p() {
            0.0
        } else {
            self.z[i - 1]
        }
    }

    fn a(&self, s: usize, r: usize) -> f64 {
        self.sum[r] - self.sum[s]
    }

    fn b(&self, s: usize) -> f64 {
        self.sum_sq[s]
    }
}

/// Per-`s` data for deciding `w_k(s, r) >= t` without solving for `beta`.
///
/// Along the constraint curve, `w_k` increases with `beta` from `low` to `high`
/// and `g` is increasing in `beta`, so `w_k(s, r) >= t` iff `g(beta_t) <= 0`
/// where `beta_t` puts the flat level at `t`.
struct LevelBounds {
    s: usize,
    b: f64,
    low: f64,
    high: f64,
}

impl LevelBounds {
    fn new(sorted: &Sorted, s: usize) -> Self {
        let (k, lambda) = (sorted.k, sorted.lambda);
        let b = sorted.b(s);
        if s == 0 {
            let level = flat_level(lambda, 0.0, k, 0);
            return Self {
                s,
                b,
                low: level,
                high: level,
            };
        }
        let low = if b >= lambda * lambda {
            0.0
        } else {
            flat_level(lambda, b, k, s)
        };
        Self {
            s,
            b,
            low,
            high: lambda / ((k - s) as f64).sqrt(),
        }
    }

    fn level_at_least(&self, sorted: &Sorted, r: usize, t: f64) -> bool {
        if t <= self.low {
            return true;
        }
        if t >= self.high || self.s == 0 {
            return false;
        }
        let ks = (sorted.k - self.s) as f64;
        let lam2 = sorted.lambda * sorted.lambda;
        let one_plus = (self.b / (lam2 - ks * t * t)).sqrt();
        t * (ks * (one_plus - 1.0) + (r - self.s) as f64) <= sorted.a(self.s, r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BlockFit {
    /// `z_{r+1} > w_k`: the block must extend further.
    TooShort,
    /// `w_k >= z_r`: the block is too long.
    TooLong,
    Fits,
}

fn classify(sorted: &Sorted, bounds: &LevelBounds, r: usize, tol: f64) -> BlockFit {
    if !bounds.level_at_least(sorted, r, sorted.at(r + 1) - tol) {
        BlockFit::TooShort
    } else if bounds.level_at_least(sorted, r, sorted.at(r) + tol) {
        BlockFit::TooLong
    } else {
        BlockFit::Fits
    }
}

/// Builds the `(s, r)` summary. Returns `None` when the `beta = 0` level is imaginary.
fn evaluate(sorted: &Sorted, s: usize, r: usize, tol: f64) -> Option<(Selection, bool)> {
    let (k, lambda) = (sorted.k, sorted.lambda);
    let a = sorted.a(s, r);
    let b = sorted.b(s);
    let beta = if s == 0 {
        0.0
    } else {
        solve_beta_unchecked(s, r, a, b, lambda, k).unwrap_or(0.0)
    };
    let level = if beta > 0.0 {
        a / ((r - s) as f64 + (k - s) as f64 * beta)
    } else {
        if lambda * lambda < b {
            return None;
        }
        flat_level(lambda, b, k, s)
    };
    let one_plus = 1.0 + beta;
    let head_ok = s == 0 || sorted.at(s) / one_plus > level - tol;
    let shrink = beta / one_plus;
    let objective = shrink * shrink * b
        + sorted.z[s..r].iter().map(|zi| (zi - level).powi(2)).sum::<f64>();
    Some((
        Selection {
            s,
            r,
            beta,
            level,
            objective,
        },
        head_ok,
    ))
}

fn materialize(sorted: &Sorted, sel: &Selection) -> Vec<f64> {
    let one_plus = 1.0 + sel.beta;
    let z = sorted.z;
    let mut w = Vec::with_capacity(z.len());
    w.extend(z[..sel.s].iter().map(|zi| zi / one_plus));
    w.extend(std::iter::repeat_n(sel.level, sel.r - sel.s));
    w.extend_from_slice(&z[sel.r..]);
    w
}

fn search_naive(sorted: &Sorted, tol: f64) -> Option<Selection> {
    let (k, p) = (sorted.k, sorted.p());
    let mut best: Option<Selection> = None;
    for s in 0..k {
        let bounds = LevelBounds::new(sorted, s);
        for r in k..=p {
            if classify(sorted, &bounds, r, tol) != BlockFit::Fits {
                continue;
            }
            if let Some((sel, true)) = evaluate(sorted, s, r, tol) {
                // Equal objectives go to the larger s.
                if best.is_none_or(|b| sel.objective <= b.objective) {
                    best = Some(sel);
                }
            }
        }
    }
    best
}

fn find_block_end(sorted: &Sorted, bounds: &LevelBounds, tol: f64) -> Option<usize> {
    let (mut lo, mut hi) = (sorted.k, sorted.p());
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        match classify(sorted, bounds, mid, tol) {
            BlockFit::Fits => return Some(mid),
            BlockFit::TooShort => lo = mid + 1,
            BlockFit::TooLong => {
                if mid == sorted.k {
                    return None;
                }
                hi = mid - 1;
            }
        }
    }
    None
}

fn search_fast(sorted: &Sorted, tol: f64, mut trace: Option<&mut Vec<SearchStep>>) -> Option<Selection> {
    let mut lo = 0usize;
    let mut hi = sorted.k - 1;
    let mut best = None;
    loop {
        let s = lo + (hi - lo) / 2;
        let bounds = LevelBounds::new(sorted, s);
        let r = find_block_end(sorted, &bounds, tol);
        let mut recorded = false;
        let go_up = match r {
            None => true,
            Some(r) => match evaluate(sorted, s, r, tol) {
                Some((sel, true)) => {
                    best = Some(sel);
                    recorded = true;
                    true
                }
                _ => false,
            },
        };
        if let Some(t) = trace.as_deref_mut() {
            t.push(SearchStep { s, r, recorded });
        }
        if go_up {
            lo = s + 1;
        } else if s == 0 {
            break;
        } else {
            hi = s - 1;
        }
        if lo > hi {
            break;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Strategy {
    Naive,
    Fast,
}

fn validate(x: &[f64], k: usize, lambda: f64) -> Result<()> {
    check_k(k, x.len())?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(GdsError::param(
            "lambda",
            format!("must be finite and nonnegative, got {lambda}"),
        ));
    }
    if let Some(index) = x.iter().position(|v| !v.is_finite()) {
        return Err(GdsError::NonFinite {
            context: "projection input",
            index,
        });
    }
    Ok(())
}

fn select(z: &[f64], k: usize, lambda: f64, strategy: Strategy, trace: Option<&mut Vec<SearchStep>>) -> Option<(Selection, Vec<f64>)> {
    let sorted = Sorted::new(z, k, lambda);
    let run = |tol: f64, trace: Option<&mut Vec<SearchStep>>| match strategy {
        Strategy::Naive => search_naive(&sorted, tol),
        Strategy::Fast => search_fast(&sorted, tol, trace),
    };
    let mut trace = trace;
    let sel = run(0.0, trace.as_deref_mut()).or_else(|| {
        let tol = TIE_SLACK * z[0];
        log::debug!("exact (s, r) search found no admissible pair; retrying with slack {tol:e}");
        run(tol, trace)
    })?;
    let w = materialize(&sorted, &sel);
    Some((sel, w))
}

enum Outcome {
    Inside,
    Zero,
    Projected(Selection, Vec<f64>),
}

fn project(x: &[f64], k: usize, lambda: f64, strategy: Strategy, trace: Option<&mut Vec<SearchStep>>) -> Result<(Outcome, SignPermutation)> {
    validate(x, k, lambda)?;
    let perm = SignPermutation::of(x);
    if lambda == 0.0 {
        return Ok((Outcome::Zero, perm));
    }
    let z = perm.sorted_abs(x);
    if top_k_l2(&z, k) <= lambda {
        return Ok((Outcome::Inside, perm));
    }
    match select(&z, k, lambda, strategy, trace) {
        Some((sel, w)) => Ok((Outcome::Projected(sel, w), perm)),
        None => Err(GdsError::NoAdmissiblePair {
            k,
            lambda,
            x: x.to_vec(),
        }),
    }
}

fn finish(x: &[f64], outcome: Outcome, perm: SignPermutation) -> Vec<f64> {
    match outcome {
        Outcome::Inside => x.to_vec(),
        Outcome::Zero => vec![0.0; x.len()],
        Outcome::Projected(_, w) => perm.apply(&w),
    }
}

/// Projection by exhaustive search over all `(s, r)` pairs.
pub fn project_dual_ball_naive(x: &[f64], k: usize, lambda: f64) -> Result<Vec<f64>> {
    let (outcome, perm) = project(x, k, lambda, Strategy::Naive, None)?;
    Ok(finish(x, outcome, perm))
}

/// Projection by nested binary search over `(s, r)`.
pub fn project_dual_ball_fast(x: &[f64], k: usize, lambda: f64) -> Result<Vec<f64>> {
    let (outcome, perm) = project(x, k, lambda, Strategy::Fast, None)?;
    Ok(finish(x, outcome, perm))
}

/// The pair chosen by the exhaustive search, or `None` if `x` needs no projection.
pub fn naive_selection(x: &[f64], k: usize, lambda: f64) -> Result<Option<Selection>> {
    match project(x, k, lambda, Strategy::Naive, None)?.0 {
        Outcome::Projected(sel, _) => Ok(Some(sel)),
        _ => Ok(None),
    }
}

/// The pair chosen by the binary search together with the outer-loop trace.
pub fn fast_selection(x: &[f64], k: usize, lambda: f64) -> Result<(Option<Selection>, Vec<SearchStep>)> {
    let mut trace = Vec::new();
    let sel = match project(x, k, lambda, Strategy::Fast, Some(&mut trace))?.0 {
        Outcome::Projected(sel, _) => Some(sel),
        _ => None,
    };
    Ok((sel, trace))
}

/// Materializes the `(s, r)` candidate for sorted magnitudes `z`.
pub fn candidate(z: &[f64], s: usize, r: usize, k: usize, lambda: f64) -> Result<ProjectionCandidate> {
    let p = z.len();
    check_k(k, p)?;
    if !(s < k && k <= r && r <= p) {
        return Err(GdsError::Contract(format!(
            "candidate requires 0 <= s < k <= r <= p, got s = {s}, k = {k}, r = {r}, p = {p}"
        )));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(GdsError::param("lambda", format!("must be positive, got {lambda}")));
    }
    if z.iter().any(|v| !(*v >= 0.0)) || z.windows(2).any(|w| w[0] < w[1]) {
        return Err(GdsError::Contract(
            "candidate requires nonnegative magnitudes sorted in decreasing order".into(),
        ));
    }
    let sorted = Sorted::new(z, k, lambda);
    let a_sr = sorted.a(s, r);
    let b_s = sorted.b(s);
    let Some((sel, _)) = evaluate(&sorted, s, r, 0.0) else {
        let mut w_sorted = z.to_vec();
        w_sorted[s..r].iter_mut().for_each(|v| *v = 0.0);
        return Ok(ProjectionCandidate {
            s,
            r,
            beta: 0.0,
            a_sr,
            b_s,
            w_sorted,
            objective: f64::INFINITY,
            cond_19: false,
            cond_20: false,
        });
    };
    let w_sorted = materialize(&sorted, &sel);
    let level = w_sorted[k - 1];
    let cond_19 = s == 0 || w_sorted[s - 1] > level;
    let cond_20 = sorted.at(r + 1) <= level && level < sorted.at(r);
    let objective = z.iter().zip(&w_sorted).map(|(a, b)| (a - b).powi(2)).sum();
    Ok(ProjectionCandidate {
        s,
        r,
        beta: sel.beta,
        a_sr,
        b_s,
        w_sorted,
        objective,
        cond_19,
        cond_20,
    })
}
