//! WebAssembly bindings for the static demo page in `web/`.
//!
//! Each exported function is a thin wrapper over a plain Rust function so the
//! numerics can be tested natively.

use gds::ksup_prox::{fast_selection, project_dual_ball_fast};
use gds::stats::{
    generate_synthetic, log_grid, mc_expected_dual_norm, width_unit_ball_bound, GroupSpec, SyntheticConfig,
};
use gds::{admm_solve_from, build_problem, ksup_dual_norm, AdmmConfig, AdmmState, GdsError, KSupportNorm, Result};
use wasm_bindgen::prelude::*;

/// Projection of a vector onto the dual-norm ball `{w : top-k L2 norm <= lambda}`.
#[wasm_bindgen(getter_with_clone)]
#[derive(Debug, Clone)]
pub struct Projection {
    pub w: Vec<f64>,
    /// Top-k L2 norm of the input.
    pub input_norm: f64,
    /// Zero when the input is already inside the ball.
    pub s: usize,
    pub r: usize,
    pub beta: f64,
}

pub fn projection(x: &[f64], k: usize, lambda: f64) -> Result<Projection> {
    let w = project_dual_ball_fast(x, k, lambda)?;
    let input_norm = ksup_dual_norm(x, k)?;
    let (sel, _) = fast_selection(x, k, lambda)?;
    let (s, r, beta) = sel.map_or((0, 0, 0.0), |s| (s.s, s.r, s.beta));
    Ok(Projection {
        w,
        input_norm,
        s,
        r,
        beta,
    })
}

/// Coefficient paths of the k-support Dantzig selector on a small synthetic problem.
#[wasm_bindgen(getter_with_clone)]
#[derive(Debug, Clone)]
pub struct LambdaPath {
    pub p: usize,
    /// Descending.
    pub lambdas: Vec<f64>,
    /// Row-major, one row of `p` coefficients per lambda.
    pub coefs: Vec<f64>,
    pub truth: Vec<f64>,
    pub l2_errors: Vec<f64>,
}

pub fn lambda_path(n: usize, k: usize, points: usize, seed: u64) -> Result<LambdaPath> {
    let p = 40;
    let data = generate_synthetic(&SyntheticConfig {
        p,
        n,
        groups: vec![
            GroupSpec {
                indices: (0..4).collect(),
                value: 3.0,
            },
            GroupSpec {
                indices: (10..14).collect(),
                value: -2.0,
            },
        ],
        noise_scale: 0.1,
        normalize_columns: true,
        shared_group_means: true,
        seed,
    })?;
    let instance = data.instance()?;
    let norm = KSupportNorm::new(k)?;
    // theta = 0 is feasible from R*(u) upwards.
    let top = build_problem(&instance, 1.0)?;
    let lambda_max = ksup_dual_norm(top.u().as_slice(), k)?;
    let mut lambdas = log_grid(1e-3 * lambda_max, lambda_max, points.max(2))?;
    lambdas.reverse();

    let config = AdmmConfig {
        max_iters: 3000,
        tol_primal: 1e-5,
        tol_change: 1e-6,
        ..AdmmConfig::default()
    };
    let mut coefs = Vec::with_capacity(lambdas.len() * p);
    let mut l2_errors = Vec::with_capacity(lambdas.len());
    let mut warm: Option<AdmmState> = None;
    for &lambda in &lambdas {
        let problem = build_problem(&instance, lambda)?;
        let res = admm_solve_from(&problem, &norm, &config, warm.as_ref())?;
        l2_errors.push((&res.theta_hat - &data.theta_star).norm());
        coefs.extend(res.theta_hat.iter());
        warm = Some(res.final_state);
    }
    Ok(LambdaPath {
        p,
        lambdas,
        coefs,
        truth: data.theta_star.as_slice().to_vec(),
        l2_errors,
    })
}

/// Monte Carlo `E[top-k norm of g]` against its closed-form bound, for k = 1..=p.
#[wasm_bindgen(getter_with_clone)]
#[derive(Debug, Clone)]
pub struct WidthCurve {
    pub ks: Vec<f64>,
    pub estimates: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub bounds: Vec<f64>,
}

pub fn width_curve(p: usize, trials: usize, seed: u64) -> Result<WidthCurve> {
    if p == 0 {
        return Err(GdsError::InvalidParameter {
            name: "p",
            reason: "must be positive".into(),
        });
    }
    let mut out = WidthCurve {
        ks: Vec::with_capacity(p),
        estimates: Vec::with_capacity(p),
        std_errors: Vec::with_capacity(p),
        bounds: Vec::with_capacity(p),
    };
    for k in 1..=p {
        let est = mc_expected_dual_norm(p, k, trials, seed)?;
        out.ks.push(k as f64);
        out.estimates.push(est.mean);
        out.std_errors.push(est.std_error);
        out.bounds.push(width_unit_ball_bound(p, k)?);
    }
    Ok(out)
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn project(x: Vec<f64>, k: usize, lambda: f64) -> std::result::Result<Projection, JsError> {
    js(projection(&x, k, lambda))
}

#[wasm_bindgen(js_name = lambdaPath)]
pub fn lambda_path_js(n: usize, k: usize, points: usize, seed: u32) -> std::result::Result<LambdaPath, JsError> {
    js(lambda_path(n, k, points, seed.into()))
}

#[wasm_bindgen(js_name = widthCurve)]
pub fn width_curve_js(p: usize, trials: usize, seed: u32) -> std::result::Result<WidthCurve, JsError> {
    js(width_curve(p, trials, seed.into()))
}
