//! Linearized (inexact) ADMM for the generalized Dantzig selector
//!
//! ```text
//!   minimize R(theta)  subject to  R*(u - A theta) <= lambda
//! ```
//!
//! written as `A theta + v = u`, `v in C_lambda = {v : R*(v) <= lambda}`.
//! Each iteration performs
//!
//! ```text
//!   theta <- prox_{2R/(rho mu)}(theta - (2/mu) A^T (A theta + v - u + z/rho))
//!   v     <- proj_{C_lambda}(u - A theta - z/rho)
//!   z     <- z + rho (A theta + v - u)
//! ```
//!
//! The quadratic penalty is linearized around the current `theta`, which is
//! valid when `mu / 2` exceeds the spectral radius of `A^T A`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GdsError, Result};
use crate::model::{AdmmConfig, AdmmState, DantzigProblem, MuChoice, ResidualRecord, SolveResult};
use crate::norms::Norm;

const POWER_ITERATION_SEED: u64 = 0x005E_ED0F_5EC7;
const POWER_ITERATION_TOL: f64 = 1e-8;
const POWER_ITERATION_MAX: usize = 10_000;

/// Largest absolute eigenvalue estimate of a square matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub radius: f64,
    pub iters: usize,
    /// Relative change of the estimate at the last iteration.
    pub rel_tol_achieved: f64,
}

/// Power iteration from a fixed pseudo-random start vector.
pub fn estimate_spectral_radius(m: &DMatrix<f64>) -> Result<SpectralEstimate> {
    if m.nrows() != m.ncols() {
        return Err(GdsError::dims(
            "spectral radius",
            "square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    let p = m.nrows();
    if p == 0 {
        return Ok(SpectralEstimate {
            radius: 0.0,
            iters: 0,
            rel_tol_achieved: 0.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_ITERATION_SEED);
    let mut v = DVector::from_fn(p, |_, _| rng.random_range(0.5..1.5));
    v /= v.norm();
    let mut w = DVector::zeros(p);
    let mut estimate = 0.0;
    let mut rel = f64::INFINITY;
    let mut iters = 0;
    while iters < POWER_ITERATION_MAX {
        iters += 1;
        w.gemv(1.0, m, &v, 0.0);
        let next = w.norm();
        if next == 0.0 {
            return Ok(SpectralEstimate {
                radius: 0.0,
                iters,
                rel_tol_achieved: 0.0,
            });
        }
        rel = (next - estimate).abs() / next;
        estimate = next;
        v.copy_from(&w);
        v /= next;
        if rel < POWER_ITERATION_TOL {
            break;
        }
    }
    Ok(SpectralEstimate {
        radius: estimate,
        iters,
        rel_tol_achieved: rel,
    })
}

/// Resolves `mu` and checks it against `2 rho(A^T A)`.
///
/// `A` is symmetric, so `rho(A^T A) = rho(A)^2`.
pub fn resolve_mu(problem: &DantzigProblem, config: &AdmmConfig) -> Result<f64> {
    let radius = estimate_spectral_radius(problem.a())?.radius;
    let bound = 2.0 * radius * radius;
    match config.mu {
        MuChoice::Auto => {
            if bound > 0.0 {
                Ok(config.spectral_margin * bound)
            } else {
                Ok(config.spectral_margin)
            }
        }
        MuChoice::Fixed(mu) => {
            if mu <= bound {
                if config.strict_mu {
                    return Err(GdsError::StepTooLarge { mu, bound });
                }
                log::warn!("{}", GdsError::StepTooLarge { mu, bound });
            }
            Ok(mu)
        }
    }
}

/// Solves from the all-zero start.
pub fn admm_solve<N: Norm + ?Sized>(
    problem: &DantzigProblem,
    norm: &N,
    config: &AdmmConfig,
) -> Result<SolveResult> {
    admm_solve_from(problem, norm, config, None)
}

/// Solves starting from `warm` (the final state of an earlier solve, or
/// [`AdmmState::from_theta`]); `None` starts from zero.
pub fn admm_solve_from<N: Norm + ?Sized>(
    problem: &DantzigProblem,
    norm: &N,
    config: &AdmmConfig,
    warm: Option<&AdmmState>,
) -> Result<SolveResult> {
    config.validate()?;
    let mu = resolve_mu(problem, config)?;
    let p = problem.p();
    let mut state = match warm {
        Some(s) => {
            for (name, len) in [("theta", s.theta.len()), ("v", s.v.len()), ("z", s.z.len())] {
                if len != p {
                    return Err(GdsError::dims("warm start", p, format!("{len} ({name})")));
                }
            }
            AdmmState {
                iter: 0,
                primal_residual: f64::INFINITY,
                theta_change: f64::INFINITY,
                ..s.clone()
            }
        }
        None => AdmmState::zeros(p),
    };

    let a = problem.a();
    let u = problem.u();
    let lambda = problem.lambda();
    let rho = config.rho;
    let step = 2.0 / mu;
    let prox_scale = 2.0 / (rho * mu);

    let mut a_theta = DVector::zeros(p);
    // A is symmetric: A^T x is computed column-wise, which is contiguous in memory.
    a_theta.gemv_tr(1.0, a, &state.theta, 0.0);
    let mut work = DVector::zeros(p);
    let mut grad = DVector::zeros(p);
    let mut history = Vec::new();
    let mut converged = false;

    for iter in 1..=config.max_iters {
        // work = A theta + v - u + z / rho
        work.copy_from(&a_theta);
        work += &state.v;
        work -= u;
        work.axpy(1.0 / rho, &state.z, 1.0);
        grad.gemv_tr(1.0, a, &work, 0.0);
        let mut arg = state.theta.clone();
        arg.axpy(-step, &grad, 1.0);
        let theta_next = DVector::from_vec(norm.prox_scaled(arg.as_slice(), prox_scale)?);

        a_theta.gemv_tr(1.0, a, &theta_next, 0.0);
        // work = u - A theta - z / rho
        work.copy_from(u);
        work -= &a_theta;
        work.axpy(-1.0 / rho, &state.z, 1.0);
        state.v = DVector::from_vec(norm.project_dual_ball(work.as_slice(), lambda)?);

        // work = A theta + v - u
        work.copy_from(&a_theta);
        work += &state.v;
        work -= u;
        state.z.axpy(rho, &work, 1.0);

        state.primal_residual = work.norm();
        state.theta_change = (&theta_next - &state.theta).norm();
        state.theta = theta_next;
        state.iter = iter;

        if !(state.primal_residual.is_finite() && state.theta_change.is_finite())
            || state.z.iter().any(|v| !v.is_finite())
        {
            return Err(GdsError::Divergence { iteration: iter });
        }

        converged = state.primal_residual <= config.tol_primal
            && state.theta_change <= config.tol_change;
        if iter % config.history_stride == 0 || converged || iter == config.max_iters {
            history.push(ResidualRecord {
                iter,
                primal_residual: state.primal_residual,
                theta_change: state.theta_change,
            });
        }
        if converged {
            break;
        }
    }

    let feasibility_gap = feasibility_gap(problem, norm, &state.theta)?;
    Ok(SolveResult {
        theta_hat: state.theta.clone(),
        iters_used: state.iter,
        converged,
        feasibility_gap,
        residual_history: history,
        mu,
        final_state: state,
    })
}

/// `max(0, R*(u - A theta) - lambda)`.
pub fn feasibility_gap<N: Norm + ?Sized>(
    problem: &DantzigProblem,
    norm: &N,
    theta: &DVector<f64>,
) -> Result<f64> {
    let residual = problem.u() - problem.a() * theta;
    Ok((norm.dual_value(residual.as_slice())? - problem.lambda()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_problem, LinearModelInstance, PsdPolicy};
    use crate::norms::{project_linf_ball, soft_threshold, KSupportNorm, L1Norm};
    use approx::assert_abs_diff_eq;

    /// Cyclic Jacobi eigenvalue iteration for symmetric matrices.
    fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
        let n = m.nrows();
        let mut a = m.clone();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].powi(2))
                .sum();
            if off < 1e-24 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if a[(p, q)].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[(i, i)]).collect()
    }

    #[test]
    fn spectral_radius_simple_matrices() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0]));
        assert_abs_diff_eq!(estimate_spectral_radius(&d).unwrap().radius, 4.0, epsilon = 1e-7);
        let i = DMatrix::<f64>::identity(6, 6);
        assert_abs_diff_eq!(estimate_spectral_radius(&i).unwrap().radius, 1.0, epsilon = 1e-12);
        assert!(estimate_spectral_radius(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn spectral_radius_matches_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..5 {
            let b = DMatrix::from_fn(10, 10, |_, _| rng.random_range(-1.0..1.0));
            let m = &b + b.transpose();
            let truth = jacobi_eigenvalues(&m).iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            let est = estimate_spectral_radius(&m).unwrap().radius;
            assert!((est - truth).abs() / truth < 1e-6, "{est} vs {truth}");
        }
    }

    fn identity_problem(y: &[f64], lambda: f64) -> DantzigProblem {
        let p = y.len();
        let inst =
            LinearModelInstance::new(DMatrix::identity(p, p), DVector::from_vec(y.to_vec())).unwrap();
        build_problem(&inst, lambda).unwrap()
    }

    #[test]
    fn origin_feasible_gives_zero() {
        let prob = identity_problem(&[0.3, -0.2, 0.1], 0.5);
        let res = admm_solve(&prob, &L1Norm, &AdmmConfig::default()).unwrap();
        assert!(res.converged);
        assert!(res.theta_hat.norm() <= 1e-6);
    }

    #[test]
    fn identity_design_soft_thresholds() {
        let y = [3.0, -1.0, 0.4, -2.5, 1.2];
        let prob = identity_problem(&y, 1.0);
        let res = admm_solve(&prob, &L1Norm, &AdmmConfig::default()).unwrap();
        assert!(res.converged);
        let expect = soft_threshold(&y, 1.0);
        for i in 0..y.len() {
            assert_abs_diff_eq!(res.theta_hat[i], expect[i], epsilon = 1e-5);
        }
        assert!(res.feasibility_gap <= 1e-5);
    }

    #[test]
    fn ksup_k1_matches_l1() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = DMatrix::from_fn(12, 6, |_, _| rng.random_range(-1.0..1.0));
        let y = DVector::from_fn(12, |_, _| rng.random_range(-1.0..1.0));
        let prob = build_problem(&LinearModelInstance::new(x, y).unwrap(), 0.2).unwrap();
        let cfg = AdmmConfig::default();
        let a = admm_solve(&prob, &L1Norm, &cfg).unwrap();
        let b = admm_solve(&prob, &KSupportNorm::new(1).unwrap(), &cfg).unwrap();
        assert!(a.converged && b.converged);
        assert!((a.theta_hat - b.theta_hat).amax() <= 1e-5);
    }

    #[test]
    fn l1_v_update_matches_soft_threshold_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let w: Vec<f64> = (0..7).map(|_| rng.random_range(-4.0..4.0)).collect();
            let lambda = rng.random_range(0.0..3.0);
            let via_projection = L1Norm.project_dual_ball(&w, lambda).unwrap();
            let via_complement: Vec<f64> =
                w.iter().zip(soft_threshold(&w, lambda)).map(|(a, b)| a - b).collect();
            assert_eq!(via_projection, project_linf_ball(&w, lambda));
            for i in 0..w.len() {
                assert_abs_diff_eq!(via_projection[i], via_complement[i], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn residual_is_recomputable() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = DMatrix::from_fn(8, 4, |_, _| rng.random_range(-1.0..1.0));
        let y = DVector::from_fn(8, |_, _| rng.random_range(-1.0..1.0));
        let prob = build_problem(&LinearModelInstance::new(x, y).unwrap(), 0.1).unwrap();
        let cfg = AdmmConfig {
            max_iters: 37,
            ..AdmmConfig::default()
        };
        let res = admm_solve(&prob, &L1Norm, &cfg).unwrap();
        let st = &res.final_state;
        let direct = prob.constraint_residual(&st.theta, &st.v).norm();
        assert_abs_diff_eq!(st.primal_residual, direct, epsilon = 1e-12);
        assert_eq!(res.residual_history.len(), 37);
        assert!(!res.converged);
    }

    #[test]
    fn deterministic_and_warm_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = DMatrix::from_fn(10, 5, |_, _| rng.random_range(-1.0..1.0));
        let y = DVector::from_fn(10, |_, _| rng.random_range(-1.0..1.0));
        let prob = build_problem(&LinearModelInstance::new(x, y).unwrap(), 0.05).unwrap();
        let cfg = AdmmConfig::default();
        let a = admm_solve(&prob, &L1Norm, &cfg).unwrap();
        let b = admm_solve(&prob, &L1Norm, &cfg).unwrap();
        assert_eq!(a.theta_hat, b.theta_hat);
        assert_eq!(a.iters_used, b.iters_used);
        let warm = admm_solve_from(&prob, &L1Norm, &cfg, Some(&a.final_state)).unwrap();
        assert!(warm.converged);
        assert!(warm.iters_used <= 2);
        assert!((warm.theta_hat - &a.theta_hat).amax() <= 1e-6);
    }

    // The primal residual is not monotone: the minimum over a 100-iteration
    // window can rebound while the active set settles. What holds is the trend.
    #[test]
    fn windowed_residual_minimum_trends_down() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for k in [1, 2, 4] {
            for _ in 0..5 {
                let x = DMatrix::from_fn(15, 8, |_, _| rng.random_range(-1.0..1.0));
                let y = DVector::from_fn(15, |_, _| rng.random_range(-1.0..1.0));
                let prob = build_problem(&LinearModelInstance::new(x, y).unwrap(), 0.1).unwrap();
                let res = admm_solve(&prob, &KSupportNorm::new(k).unwrap(), &AdmmConfig::default()).unwrap();
                assert!(res.converged);
                let mins: Vec<f64> = res
                    .residual_history
                    .chunks(100)
                    .map(|w| w.iter().map(|r| r.primal_residual).fold(f64::INFINITY, f64::min))
                    .collect();
                if mins.len() < 3 {
                    continue;
                }
                // least-squares slope of log10(min) against window index
                let pts: Vec<(f64, f64)> = mins
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (i as f64, m.max(1e-300).log10()))
                    .collect();
                let nf = pts.len() as f64;
                let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
                let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
                let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
                    / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
                assert!(slope < 0.0, "k={k} {mins:?}");
                assert!(mins.last().unwrap() <= &mins[0], "k={k} {mins:?}");
            }
        }
    }

    #[test]
    fn mu_validation() {
        let prob = identity_problem(&[1.0, 2.0], 0.5);
        let strict = AdmmConfig {
            mu: MuChoice::Fixed(1.5),
            strict_mu: true,
            ..AdmmConfig::default()
        };
        assert!(matches!(
            admm_solve(&prob, &L1Norm, &strict),
            Err(GdsError::StepTooLarge { .. })
        ));
        let ok = AdmmConfig {
            mu: MuChoice::Fixed(2.5),
            strict_mu: true,
            ..AdmmConfig::default()
        };
        assert!(admm_solve(&prob, &L1Norm, &ok).unwrap().converged);
        assert_abs_diff_eq!(resolve_mu(&prob, &AdmmConfig::default()).unwrap(), 2.02, epsilon = 1e-6);
    }

    #[test]
    fn divergence_detected() {
        // mu far below the bound makes the linearized step blow up.
        let prob = DantzigProblem::from_gram(
            DMatrix::from_diagonal(&DVector::from_vec(vec![10.0, 1.0])),
            DVector::from_vec(vec![5.0, 1.0]),
            0.1,
            PsdPolicy::Strict,
        )
        .unwrap();
        let cfg = AdmmConfig {
            mu: MuChoice::Fixed(1e-3),
            max_iters: 10_000,
            ..AdmmConfig::default()
        };
        assert!(matches!(
            admm_solve(&prob, &L1Norm, &cfg),
            Err(GdsError::Divergence { .. })
        ));
    }
}
