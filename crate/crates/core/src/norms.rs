//! Norms with their duals, scaled proximal maps and dual-ball projections.
//!
//! Two pairs are provided: L1 / L-infinity and the k-support norm / top-k L2.
//! For a norm `R` the scaled prox and the dual-ball projection are tied by
//! Moreau's decomposition, `x = prox_{beta R}(x) + proj_{R*(.) <= beta}(x)`,
//! so each implementation only needs one of them natively.

use crate::error::{GdsError, Result};
use crate::ksup_prox;

/// A norm `R` on `R^p` together with the maps the solver needs.
pub trait Norm: Send + Sync {
    fn name(&self) -> &'static str;

    /// `R(x)`.
    fn value(&self, x: &[f64]) -> Result<f64>;

    /// `R*(x)`.
    fn dual_value(&self, x: &[f64]) -> Result<f64>;

    /// Euclidean projection onto `{v : R*(v) <= radius}`.
    fn project_dual_ball(&self, x: &[f64], radius: f64) -> Result<Vec<f64>>;

    /// `prox_{beta R}(x)`. Defaults to the Moreau complement of the dual-ball projection.
    fn prox_scaled(&self, x: &[f64], beta: f64) -> Result<Vec<f64>> {
        prox_from_projection(x, beta, self)
    }
}

/// `prox_{beta R}(x) = x - proj_{R*(.) <= beta}(x)`.
pub fn prox_from_projection<N: Norm + ?Sized>(x: &[f64], beta: f64, norm: &N) -> Result<Vec<f64>> {
    check_radius("beta", beta)?;
    let proj = norm.project_dual_ball(x, beta)?;
    Ok(x.iter().zip(&proj).map(|(xi, pi)| xi - pi).collect())
}

/// Elementwise `sign(x_i) max(0, |x_i| - beta)`.
pub fn soft_threshold(x: &[f64], beta: f64) -> Vec<f64> {
    x.iter()
        .map(|&xi| xi.signum() * (xi.abs() - beta).max(0.0))
        .collect()
}

/// Elementwise clamp to `[-lambda, lambda]`.
pub fn project_linf_ball(x: &[f64], lambda: f64) -> Vec<f64> {
    x.iter().map(|&xi| xi.clamp(-lambda, lambda)).collect()
}

/// The L1 norm, whose dual is the max-abs norm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct L1Norm;

impl Norm for L1Norm {
    fn name(&self) -> &'static str {
        "l1"
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(x.iter().map(|v| v.abs()).sum())
    }

    fn dual_value(&self, x: &[f64]) -> Result<f64> {
        Ok(x.iter().fold(0.0, |m, v| m.max(v.abs())))
    }

    fn project_dual_ball(&self, x: &[f64], radius: f64) -> Result<Vec<f64>> {
        check_radius("radius", radius)?;
        Ok(project_linf_ball(x, radius))
    }

    fn prox_scaled(&self, x: &[f64], beta: f64) -> Result<Vec<f64>> {
        check_radius("beta", beta)?;
        Ok(soft_threshold(x, beta))
    }
}

/// The k-support norm. `k = 1` gives L1 and `k = p` gives L2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KSupportNorm {
    k: usize,
}

impl KSupportNorm {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(GdsError::param("k", "must be at least 1"));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Norm for KSupportNorm {
    fn name(&self) -> &'static str {
        "ksup"
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        ksup_norm(x, self.k)
    }

    fn dual_value(&self, x: &[f64]) -> Result<f64> {
        ksup_dual_norm(x, self.k)
    }

    fn project_dual_ball(&self, x: &[f64], radius: f64) -> Result<Vec<f64>> {
        ksup_prox::project_dual_ball_fast(x, self.k, radius)
    }
}

pub(crate) fn check_k(k: usize, p: usize) -> Result<()> {
    if k == 0 || k > p {
        return Err(GdsError::param(
            "k",
            format!("must satisfy 1 <= k <= p = {p}, got {k}"),
        ));
    }
    Ok(())
}

fn check_radius(name: &'static str, radius: f64) -> Result<()> {
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(GdsError::param(
            name,
            format!("must be finite and nonnegative, got {radius}"),
        ));
    }
    Ok(())
}

/// Indices of `x` ordered by decreasing magnitude; ties keep the original index order.
pub(crate) fn magnitude_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()));
    order
}

/// `|x|` sorted in decreasing order.
pub(crate) fn sorted_magnitudes(x: &[f64]) -> Vec<f64> {
    let mut z: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    z.sort_by(|a, b| b.total_cmp(a));
    z
}

/// Top-k L2 norm of an already sorted magnitude vector.
pub(crate) fn top_k_l2(sorted: &[f64], k: usize) -> f64 {
    sorted[..k].iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Dual of the k-support norm: the L2 norm of the k largest-magnitude entries.
pub fn ksup_dual_norm(x: &[f64], k: usize) -> Result<f64> {
    check_k(k, x.len())?;
    Ok(top_k_l2(&sorted_magnitudes(x), k))
}

/// The k-support norm.
///
/// With `z = |x|` sorted decreasingly (`z_0 = +inf`), let `r` in `0..k` be the
/// index with `z_{k-r-1} > T_r / (r+1) >= z_{k-r}`, where `T_r = sum_{i >= k-r} z_i`.
/// Then `||x||_k^sp = sqrt(sum_{i < k-r} z_i^2 + T_r^2 / (r+1))`.
pub fn ksup_norm(x: &[f64], k: usize) -> Result<f64> {
    let p = x.len();
    check_k(k, p)?;
    let z = sorted_magnitudes(x);
    // 1-based accessor with z_0 = +inf.
    let at = |i: usize| if i == 0 { f64::INFINITY } else { z[i - 1] };

    // tail[i] = sum_{j >= i} z_j (1-based); tail[p + 1] = 0.
    let mut tail = vec![0.0; p + 2];
    for i in (1..=p).rev() {
        tail[i] = tail[i + 1] + z[i - 1];
    }
    let mut chosen = k - 1;
    for r in 0..k {
        let t = tail[k - r] / (r + 1) as f64;
        if at(k - r - 1) > t && t >= at(k - r) {
            chosen = r;
            break;
        }
    }
    let r = chosen;
    let head: f64 = z[..k - r - 1].iter().map(|v| v * v).sum();
    let t = tail[k - r];
    Ok((head + t * t / (r + 1) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, p: usize) -> Vec<f64> {
        (0..p).map(|_| rng.random_range(-3.0..3.0)).collect()
    }

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(&[3.0, -1.0, 0.2], 1.0), vec![2.0, 0.0, 0.0]);
        let x = [1.5, -2.5, 0.0, 7.0];
        assert_eq!(soft_threshold(&x, 0.0), x.to_vec());
        let x = [2.0, 0.5, -3.0];
        let st = soft_threshold(&x, 1.0);
        assert_eq!(st, vec![1.0, 0.0, -2.0]);
        let clip = project_linf_ball(&x, 1.0);
        for i in 0..3 {
            assert_eq!(x[i] - clip[i], st[i]);
        }
    }

    #[test]
    fn linf_projection_examples() {
        assert_eq!(project_linf_ball(&[2.0, 0.5, -3.0], 1.0), vec![1.0, 0.5, -1.0]);
        let inside = [0.3, -0.9, 1.0];
        assert_eq!(project_linf_ball(&inside, 1.0), inside.to_vec());
    }

    #[test]
    fn linf_moreau_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x = random_vec(&mut rng, 9);
            let lam = rng.random_range(0.0..2.0);
            let a = project_linf_ball(&x, lam);
            let b = soft_threshold(&x, lam);
            for i in 0..x.len() {
                assert_abs_diff_eq!(a[i] + b[i], x[i], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn dual_norm_examples() {
        assert_abs_diff_eq!(ksup_dual_norm(&[3.0, 2.0, 1.0], 2).unwrap(), 13f64.sqrt(), epsilon = 1e-15);
        let x = [0.5, -4.0, 2.0, 1.0];
        assert_eq!(ksup_dual_norm(&x, 1).unwrap(), 4.0);
        let l2 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert_abs_diff_eq!(ksup_dual_norm(&x, 4).unwrap(), l2, epsilon = 1e-15);
        assert!(ksup_dual_norm(&x, 0).is_err());
        assert!(ksup_dual_norm(&x, 5).is_err());
    }

    fn subsets(p: usize, size: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, p: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == size {
                out.push(cur.clone());
                return;
            }
            for i in start..p {
                cur.push(i);
                rec(i + 1, p, size, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, p, size, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn dual_norm_matches_group_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = random_vec(&mut rng, 8);
            let mut best: f64 = 0.0;
            for size in 1..=3 {
                for g in subsets(8, size) {
                    best = best.max(g.iter().map(|&i| x[i] * x[i]).sum::<f64>().sqrt());
                }
            }
            assert_abs_diff_eq!(ksup_dual_norm(&x, 3).unwrap(), best, epsilon = 1e-12);
        }
    }

    #[test]
    fn ksup_norm_boundary_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = random_vec(&mut rng, 7);
            let l1: f64 = x.iter().map(|v| v.abs()).sum();
            let l2 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert_abs_diff_eq!(ksup_norm(&x, 1).unwrap(), l1, epsilon = 1e-12);
            assert_abs_diff_eq!(ksup_norm(&x, 7).unwrap(), l2, epsilon = 1e-12);
        }
        assert_eq!(ksup_norm(&[0.0; 4], 2).unwrap(), 0.0);
    }

    #[test]
    fn ksup_norm_worked_example() {
        // Attained by u = (1, 1, 1)/sqrt(2) on the dual unit ball: 6/sqrt(2).
        assert_abs_diff_eq!(ksup_norm(&[3.0, 2.0, 1.0], 2).unwrap(), 18f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(ksup_norm(&[1.0, 1.0, 1.0], 2).unwrap(), 4.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn l1_prox_matches_moreau_complement() {
        let x = [2.0, 0.5, -3.0];
        let via = prox_from_projection(&x, 1.0, &L1Norm).unwrap();
        assert_eq!(via, vec![1.0, 0.0, -2.0]);
        assert_eq!(prox_from_projection(&x, 0.0, &L1Norm).unwrap(), x.to_vec());
        assert_eq!(prox_from_projection(&x, 0.0, &KSupportNorm::new(2).unwrap()).unwrap(), x.to_vec());
    }

    #[test]
    fn ksup_prox_random_probe_optimality() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let norm = KSupportNorm::new(2).unwrap();
        let beta = 0.7;
        let x = random_vec(&mut rng, 6);
        let w = norm.prox_scaled(&x, beta).unwrap();
        let obj = |v: &[f64]| {
            0.5 * v.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
                + beta * ksup_norm(v, 2).unwrap()
        };
        let best = obj(&w);
        for _ in 0..1000 {
            let scale = 10f64.powf(rng.random_range(-4.0..0.0));
            let probe: Vec<f64> = w.iter().map(|wi| wi + scale * rng.random_range(-1.0..1.0)).collect();
            assert!(obj(&probe) >= best - 1e-12);
        }
    }

    #[test]
    fn ksup_requires_valid_k() {
        assert!(KSupportNorm::new(0).is_err());
        let n = KSupportNorm::new(4).unwrap();
        assert!(n.value(&[1.0, 2.0]).is_err());
        assert!(n.project_dual_ball(&[1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn magnitude_order_is_stable() {
        let x = [1.0, -3.0, 3.0, 0.5, -1.0];
        assert_eq!(magnitude_order(&x), vec![1, 2, 0, 4, 3]);
    }
}
