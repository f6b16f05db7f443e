//! Problem instances, solver configuration and solve results.
//!
//! The estimator consumes the Gram form of a linear model `y = X theta + w`:
//! `A = X^T X` and `u = X^T y`, together with the constraint radius `lambda`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::admm::estimate_spectral_radius;
use crate::error::{GdsError, Result};

/// A design matrix and its observations.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModelInstance {
    x: DMatrix<f64>,
    y: DVector<f64>,
}

impl LinearModelInstance {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(GdsError::dims(
                "design matrix",
                "at least 1x1",
                format!("{}x{}", x.nrows(), x.ncols()),
            ));
        }
        if y.len() != x.nrows() {
            return Err(GdsError::dims(
                "response length vs design rows",
                format!("{} (rows of X)", x.nrows()),
                format!("{} (length of y)", y.len()),
            ));
        }
        check_finite("design matrix", x.as_slice())?;
        check_finite("response", y.as_slice())?;
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Number of features.
    pub fn p(&self) -> usize {
        self.x.ncols()
    }
}

/// How the positive-semidefiniteness of `A` is checked when building a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PsdPolicy {
    /// No check.
    Skip,
    /// Log a warning when the check fails.
    #[default]
    Warn,
    /// Fail with [`GdsError::NotPositiveSemidefinite`].
    Strict,
}

/// Gram-form data of a Dantzig-type problem:
/// minimize `R(theta)` subject to `R*(u - A theta) <= lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct DantzigProblem {
    a: DMatrix<f64>,
    u: DVector<f64>,
    lambda: f64,
}

impl DantzigProblem {
    /// Builds a problem from an already formed Gram matrix and correlation vector.
    ///
    /// `a` must be square, symmetric to `1e-12` relative, and match `u` in size.
    pub fn from_gram(
        a: DMatrix<f64>,
        u: DVector<f64>,
        lambda: f64,
        psd: PsdPolicy,
    ) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(GdsError::dims(
                "Gram matrix",
                "square",
                format!("{}x{}", a.nrows(), a.ncols()),
            ));
        }
        if u.len() != a.nrows() {
            return Err(GdsError::dims(
                "correlation vector vs Gram matrix",
                a.nrows(),
                u.len(),
            ));
        }
        check_lambda(lambda)?;
        check_finite("Gram matrix", a.as_slice())?;
        check_finite("correlation vector", u.as_slice())?;

        let scale = a.amax().max(f64::MIN_POSITIVE);
        let asymmetry = (&a - a.transpose()).amax() / scale;
        if asymmetry > 1e-12 {
            return Err(GdsError::NotSymmetric { asymmetry });
        }
        let a = symmetrize(a);
        check_psd(&a, psd)?;
        Ok(Self { a, u, lambda })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn u(&self) -> &DVector<f64> {
        &self.u
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p(&self) -> usize {
        self.u.len()
    }

    /// Same data with a different constraint radius.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self {
            a: self.a.clone(),
            u: self.u.clone(),
            lambda,
        })
    }

    /// `A theta + v - u`.
    pub fn constraint_residual(&self, theta: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        &self.a * theta + v - &self.u
    }
}

/// Forms `A = X^T X` and `u = X^T y`. `A` is symmetrized by averaging with its transpose.
pub fn build_problem(instance: &LinearModelInstance, lambda: f64) -> Result<DantzigProblem> {
    build_problem_with(instance, lambda, PsdPolicy::Skip)
}

/// [`build_problem`] with an explicit semidefiniteness check policy.
///
/// A Gram matrix is semidefinite by construction, so the check only guards
/// against rounding in extreme cases.
pub fn build_problem_with(
    instance: &LinearModelInstance,
    lambda: f64,
    psd: PsdPolicy,
) -> Result<DantzigProblem> {
    check_lambda(lambda)?;
    let x = instance.x();
    let a = symmetrize(x.tr_mul(x));
    let u = x.tr_mul(instance.y());
    check_psd(&a, psd)?;
    Ok(DantzigProblem { a, u, lambda })
}

fn symmetrize(a: DMatrix<f64>) -> DMatrix<f64> {
    let p = a.nrows();
    let mut out = a;
    for i in 0..p {
        for j in (i + 1)..p {
            let m = 0.5 * (out[(i, j)] + out[(j, i)]);
            out[(i, j)] = m;
            out[(j, i)] = m;
        }
    }
    out
}

fn check_psd(a: &DMatrix<f64>, policy: PsdPolicy) -> Result<()> {
    if policy == PsdPolicy::Skip || a.nrows() == 0 {
        return Ok(());
    }
    let radius = estimate_spectral_radius(a)?.radius;
    // A + tau I admits a Cholesky factor iff its smallest eigenvalue exceeds -tau.
    let tau = 1e-10 * radius.max(f64::MIN_POSITIVE);
    let shifted = a + DMatrix::<f64>::identity(a.nrows(), a.nrows()) * tau;
    if shifted.cholesky().is_some() {
        return Ok(());
    }
    let min_eigenvalue = a.clone().symmetric_eigenvalues().min();
    let err = GdsError::NotPositiveSemidefinite {
        min_eigenvalue,
        spectral_radius: radius,
    };
    match policy {
        PsdPolicy::Strict => Err(err),
        _ => {
            log::warn!("{err}");
            Ok(())
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(GdsError::param(
            "lambda",
            format!("must be finite and nonnegative, got {lambda}"),
        ));
    }
    Ok(())
}

pub(crate) fn check_finite(context: &'static str, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(GdsError::NonFinite { context, index }),
        None => Ok(()),
    }
}

/// Choice of the linearization parameter `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MuChoice {
    /// `mu = spectral_margin * 2 * rho(A^T A)`.
    Auto,
    Fixed(f64),
}

/// Settings for the linearized ADMM solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmmConfig {
    /// Augmented Lagrangian penalty.
    pub rho: f64,
    pub mu: MuChoice,
    pub max_iters: usize,
    /// Threshold on `||A theta + v - u||_2`.
    pub tol_primal: f64,
    /// Threshold on `||theta_{k+1} - theta_k||_2`.
    pub tol_change: f64,
    /// Factor applied to `2 rho(A^T A)` when `mu` is automatic. Must exceed 1.
    pub spectral_margin: f64,
    /// Reject an explicit `mu` that violates the convergence condition instead of warning.
    pub strict_mu: bool,
    /// Record every `history_stride`-th iterate in the residual history (the last one is always kept).
    pub history_stride: usize,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            mu: MuChoice::Auto,
            max_iters: 50_000,
            tol_primal: 1e-6,
            tol_change: 1e-8,
            spectral_margin: 1.01,
            strict_mu: false,
            history_stride: 1,
        }
    }
}

impl AdmmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(GdsError::param("rho", format!("must be positive, got {}", self.rho)));
        }
        if let MuChoice::Fixed(mu) = self.mu {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(GdsError::param("mu", format!("must be positive, got {mu}")));
            }
        }
        if self.max_iters == 0 {
            return Err(GdsError::param("max_iters", "must be at least 1"));
        }
        if !(self.tol_primal > 0.0 && self.tol_change > 0.0) {
            return Err(GdsError::param("tolerance", "tolerances must be positive"));
        }
        if !(self.spectral_margin.is_finite() && self.spectral_margin > 1.0) {
            return Err(GdsError::param(
                "spectral_margin",
                format!("must exceed 1, got {}", self.spectral_margin),
            ));
        }
        if self.history_stride == 0 {
            return Err(GdsError::param("history_stride", "must be at least 1"));
        }
        Ok(())
    }
}

/// Iterates of the solver: primal `theta`, splitting variable `v` and multiplier `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub theta: DVector<f64>,
    pub v: DVector<f64>,
    pub z: DVector<f64>,
    pub iter: usize,
    /// `||A theta + v - u||_2`.
    pub primal_residual: f64,
    /// `||theta_{k+1} - theta_k||_2`.
    pub theta_change: f64,
}

impl AdmmState {
    /// All-zero start.
    pub fn zeros(p: usize) -> Self {
        Self {
            theta: DVector::zeros(p),
            v: DVector::zeros(p),
            z: DVector::zeros(p),
            iter: 0,
            primal_residual: f64::INFINITY,
            theta_change: f64::INFINITY,
        }
    }

    /// Start from a given `theta` with zero splitting and multiplier variables.
    pub fn from_theta(theta: DVector<f64>) -> Self {
        let p = theta.len();
        Self {
            theta,
            ..Self::zeros(p)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualRecord {
    pub iter: usize,
    pub primal_residual: f64,
    pub theta_change: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub theta_hat: DVector<f64>,
    pub iters_used: usize,
    pub converged: bool,
    /// `max(0, R*(u - A theta_hat) - lambda)`.
    pub feasibility_gap: f64,
    pub residual_history: Vec<ResidualRecord>,
    /// `mu` actually used.
    pub mu: f64,
    /// Final iterates, usable as a warm start.
    pub final_state: AdmmState,
}
