use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gds::experiments::{
    self, bench_prox, error_vs_k, error_vs_n, experiment_admm_config, roc_experiment, BenchRow, ErrorRow,
    ExperimentSettings, LambdaRule, RocRow,
};
use gds::io::{format_vector, read_matrix, read_vector};
use gds::stats::{log_grid, SolveStatus, SupportEps};
use gds::{admm_solve, build_problem_with, AdmmConfig, KSupportNorm, L1Norm, LinearModelInstance, MuChoice, Norm};
use gds::{GdsError, PsdPolicy};
use serde::Serialize;

use crate::args::{
    BenchArgs, BoundsArgs, ErrorArgs, ExperimentFlags, Format, IntList, MuArg, NormName, OutputFlags, PairList,
    RocArgs, SolveArgs, SolverFlags,
};
use crate::error::{CliError, EXIT_INTERNAL, EXIT_NOT_CONVERGED};
use crate::output::{open, RowSink};
use crate::settings::Layers;
use crate::svg::{line_chart, Axes, Series};

pub const BENCH_HEADER: &[&str] = &["p", "k", "method", "mean_ns", "sd_ns"];
pub const ROC_HEADER: &[&str] = &["k", "seed", "lambda", "tpr", "fpr", "l2_error", "iters", "status"];
pub const ERROR_HEADER: &[&str] = &["n", "k", "rep", "seed", "lambda", "l2_error", "iters", "status"];
pub const BOUNDS_HEADER: &[&str] = &[
    "p",
    "k",
    "trials",
    "mean",
    "std_error",
    "bound",
    "margin",
    "length_bracket",
    "passed",
];

fn admm_config(layers: &Layers, flags: &SolverFlags, base: AdmmConfig) -> Result<AdmmConfig, CliError> {
    let mu = match layers.opt(flags.mu, "mu")? {
        None | Some(MuArg::Auto) => base.mu,
        Some(MuArg::Value(v)) => MuChoice::Fixed(v),
    };
    let cfg = AdmmConfig {
        rho: layers.get(flags.rho, "rho", base.rho)?,
        mu,
        max_iters: layers.get(flags.max_iters, "max-iters", base.max_iters)?,
        tol_primal: layers.get(flags.tol_primal, "tol-primal", base.tol_primal)?,
        tol_change: layers.get(flags.tol_change, "tol-change", base.tol_change)?,
        ..base
    };
    cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(cfg)
}

fn input(e: GdsError) -> CliError {
    CliError::Input(e.to_string())
}

fn write_svg(path: &Path, svg: &str) -> Result<(), CliError> {
    std::fs::write(path, svg).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct SolveReport<'a> {
    design: &'a Path,
    response: &'a Path,
    norm: &'static str,
    k: Option<usize>,
    lambda: f64,
    n: usize,
    p: usize,
    rho: f64,
    mu: f64,
    max_iters: usize,
    converged: bool,
    iters_used: usize,
    primal_residual: f64,
    theta_change: f64,
    feasibility_gap: f64,
    objective: f64,
    wall_time_s: f64,
    residual_history: &'a [gds::model::ResidualRecord],
}

pub fn solve(args: SolveArgs) -> Result<i32, CliError> {
    let layers = Layers::load(args.config.as_deref())?;
    let design: PathBuf = layers
        .opt(args.design, "design")?
        .ok_or_else(|| CliError::Input("--design is required".into()))?;
    let response: PathBuf = layers
        .opt(args.response, "response")?
        .ok_or_else(|| CliError::Input("--response is required".into()))?;
    let lambda: f64 = layers
        .opt(args.lambda, "lambda")?
        .ok_or_else(|| CliError::Input("--lambda is required".into()))?;
    let norm_name = layers.get(args.norm, "norm", NormName::L1)?;
    let k = layers.opt(args.k, "k")?;
    let strict = layers.switch(args.strict_psd, "strict-psd")?;
    let out: Option<PathBuf> = layers.opt(args.out, "out")?;
    let report_path: Option<PathBuf> = layers
        .opt(args.report, "report")?
        .or_else(|| out.as_ref().map(|o| PathBuf::from(format!("{}.report.json", o.display()))));

    let mut cfg = admm_config(&layers, &args.solver, AdmmConfig::default())?;
    cfg.strict_mu = strict;
    cfg.history_stride = (cfg.max_iters / 1000).max(1);

    let x = read_matrix(&design).map_err(input)?;
    let y = read_vector(&response).map_err(input)?;
    let instance = LinearModelInstance::new(x, y).map_err(input)?;
    let policy = if strict { PsdPolicy::Strict } else { PsdPolicy::Warn };
    let problem = build_problem_with(&instance, lambda, policy).map_err(input)?;

    let ksup;
    let norm: &dyn Norm = match norm_name {
        NormName::L1 => &L1Norm,
        NormName::Ksup => {
            let k = k.ok_or_else(|| CliError::Input("--k is required with --norm ksup".into()))?;
            if k > instance.p() {
                return Err(CliError::Input(format!("--k {k} exceeds p = {}", instance.p())));
            }
            ksup = KSupportNorm::new(k).map_err(input)?;
            &ksup
        }
    };

    let start = Instant::now();
    let res = admm_solve(&problem, norm, &cfg).map_err(|e| match e {
        GdsError::StepTooLarge { .. } => input(e),
        other => CliError::Core(other),
    })?;
    let wall = start.elapsed().as_secs_f64();

    let mut w = open(out.as_deref())?;
    w.write_all(format_vector(&res.theta_hat).as_bytes())?;
    w.flush()?;

    let report = SolveReport {
        design: &design,
        response: &response,
        norm: norm.name(),
        k: (norm_name == NormName::Ksup).then_some(k).flatten(),
        lambda,
        n: instance.n(),
        p: instance.p(),
        rho: cfg.rho,
        mu: res.mu,
        max_iters: cfg.max_iters,
        converged: res.converged,
        iters_used: res.iters_used,
        primal_residual: res.final_state.primal_residual,
        theta_change: res.final_state.theta_change,
        feasibility_gap: res.feasibility_gap,
        objective: norm.value(res.theta_hat.as_slice())?,
        wall_time_s: wall,
        residual_history: &res.residual_history,
    };
    if let Some(path) = report_path {
        let f = std::fs::File::create(&path).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
        serde_json::to_writer_pretty(f, &report)?;
    }
    if res.converged {
        Ok(0)
    } else {
        eprintln!(
            "not converged after {} iterations (primal residual {:e}, theta change {:e})",
            res.iters_used, res.final_state.primal_residual, res.final_state.theta_change
        );
        Ok(EXIT_NOT_CONVERGED)
    }
}

struct Common {
    layers: Layers,
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
}

fn common(output: &OutputFlags) -> Result<Common, CliError> {
    let layers = Layers::load(output.config.as_deref())?;
    Ok(Common {
        seed: layers.seed(output.seed, 0)?,
        format: layers.get(output.format, "format", Format::Csv)?,
        out: layers.opt(output.out.clone(), "out")?,
        svg: layers.opt(output.svg.clone(), "svg")?,
        layers,
    })
}

/// Runs `body`, streaming rows into a sink, then writes the completion marker.
fn stream<R: Serialize, T>(
    c: &Common,
    header: &[&str],
    body: impl FnOnce(&mut dyn FnMut(&R)) -> Result<T, GdsError>,
) -> Result<T, CliError> {
    let mut sink = RowSink::new(open(c.out.as_deref())?, c.format, header)?;
    let mut write_err: Option<CliError> = None;
    let result = body(&mut |row: &R| {
        if write_err.is_none() {
            if let Err(e) = sink.push(row) {
                write_err = Some(e);
            }
        }
    });
    if let Some(e) = write_err {
        return Err(e);
    }
    match result {
        Ok(v) => {
            sink.finish(None)?;
            Ok(v)
        }
        Err(e) => {
            sink.finish(Some(&e.to_string()))?;
            Err(CliError::Core(e))
        }
    }
}

pub fn bench(args: BenchArgs) -> Result<i32, CliError> {
    let c = common(&args.output)?;
    let ps = c.layers.get(args.p, "p", IntList(vec![1000, 2000, 5000, 10_000]))?.0;
    let ratios = c.layers.get(args.ratio, "ratio", IntList(vec![200, 100, 50, 20]))?.0;
    let reps = c.layers.get(args.reps, "reps", 200)?;
    let rows: Vec<BenchRow> = match stream(&c, BENCH_HEADER, |on| bench_prox(&ps, &ratios, reps, c.seed, on)) {
        Err(CliError::Core(GdsError::ProjectionMismatch { k, lambda, deviation, x })) => {
            eprintln!("projection routes disagree by {deviation:e} (k = {k}, lambda = {lambda})");
            eprintln!("offending vector:");
            eprintln!("{}", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
            return Ok(EXIT_INTERNAL);
        }
        other => other?,
    };
    if let Some(path) = &c.svg {
        let mut series = Vec::new();
        for &ratio in &ratios {
            for method in ["naive", "fast"] {
                let points = rows
                    .iter()
                    .filter(|r| r.method == method && r.p / r.k.max(1) == ratio)
                    .map(|r| (r.p as f64, r.mean_ns / 1e6))
                    .collect();
                series.push(Series {
                    name: format!("{method}, p/k={ratio}"),
                    points,
                    spread: None,
                });
            }
        }
        let axes = Axes { log_x: true, log_y: true };
        write_svg(path, &line_chart("Projection time", "p", "mean time (ms)", &series, axes))?;
    }
    Ok(0)
}

fn settings(layers: &Layers, flags: &ExperimentFlags) -> Result<ExperimentSettings, CliError> {
    Ok(ExperimentSettings {
        admm: admm_config(layers, &flags.solver, experiment_admm_config())?,
        lambda: match layers.opt(flags.lambda, "lambda")? {
            Some(l) if l >= 0.0 && l.is_finite() => LambdaRule::Fixed(l),
            Some(l) => return Err(CliError::Input(format!("--lambda must be nonnegative, got {l}"))),
            None => LambdaRule::Theory,
        },
        warm_start: !layers.switch(flags.no_warm_start, "no-warm-start")?,
        normalize_columns: !layers.switch(flags.no_normalize_columns, "no-normalize-columns")?,
        noise_scale: layers.get(flags.noise, "noise", 0.01)?,
    })
}

fn diverged_exit(count: usize) -> i32 {
    if count > 0 {
        eprintln!("{count} solves diverged; their rows have status `diverged`");
        EXIT_NOT_CONVERGED
    } else {
        0
    }
}

pub fn roc(args: RocArgs) -> Result<i32, CliError> {
    let c = common(&args.common.output)?;
    let l = &c.layers;
    let s = settings(l, &args.common)?;
    let n = l.get(args.n, "n", 400)?;
    let ks = l.get(args.k, "k", IntList(vec![1, 10, 50]))?.0;
    let grid = log_grid(
        l.get(args.lambda_min, "lambda-min", 1e-2)?,
        l.get(args.lambda_max, "lambda-max", 1e3)?,
        l.get(args.lambda_points, "lambda-points", 26)?,
    )
    .map_err(input)?;
    let eps = match l.opt(args.support_eps, "support-eps")? {
        Some(e) => SupportEps::Absolute(e),
        None => SupportEps::Relative,
    };
    let rows: Vec<RocRow> = stream(&c, ROC_HEADER, |on| roc_experiment(n, &ks, &grid, c.seed, &s, eps, on))?;
    if let Some(path) = &c.svg {
        let series: Vec<Series> = ks
            .iter()
            .map(|&k| {
                let mut points: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.k == k && r.status != SolveStatus::Diverged)
                    .map(|r| (r.fpr, r.tpr))
                    .collect();
                points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
                Series {
                    name: format!("k = {k}"),
                    points,
                    spread: None,
                }
            })
            .collect();
        write_svg(path, &line_chart("ROC", "false positive rate", "true positive rate", &series, Axes::default()))?;
    }
    Ok(diverged_exit(rows.iter().filter(|r| r.status == SolveStatus::Diverged).count()))
}

fn error_svg(path: &Path, rows: &[ErrorRow], by_n: bool) -> Result<(), CliError> {
    let summary = experiments::summarize_errors(rows);
    let mut groups: Vec<usize> = summary.iter().map(|s| if by_n { s.k } else { s.n }).collect();
    groups.sort_unstable();
    groups.dedup();
    let series: Vec<Series> = groups
        .iter()
        .map(|&g| {
            let cells: Vec<_> = summary.iter().filter(|s| (if by_n { s.k } else { s.n }) == g).collect();
            Series {
                name: if by_n { format!("k = {g}") } else { format!("n = {g}") },
                points: cells
                    .iter()
                    .map(|s| (if by_n { s.n } else { s.k } as f64, s.mean))
                    .collect(),
                spread: Some(cells.iter().map(|s| s.sd).collect()),
            }
        })
        .collect();
    let (title, x) = if by_n { ("L2 error vs n", "n") } else { ("L2 error vs k", "k") };
    write_svg(path, &line_chart(title, x, "mean L2 error", &series, Axes::default()))
}

pub fn error_n(args: ErrorArgs) -> Result<i32, CliError> {
    let c = common(&args.common.output)?;
    let l = &c.layers;
    let s = settings(l, &args.common)?;
    let ns = l.get(args.n, "n", IntList((30..=300).step_by(30).collect()))?.0;
    let ks = l.get(args.k, "k", IntList(vec![1, 10, 50]))?.0;
    let reps = l.get(args.reps, "reps", 10)?;
    let rows = stream(&c, ERROR_HEADER, |on| error_vs_n(&ns, &ks, reps, c.seed, &s, on))?;
    if let Some(path) = &c.svg {
        error_svg(path, &rows, true)?;
    }
    Ok(diverged_exit(rows.iter().filter(|r| r.status == SolveStatus::Diverged).count()))
}

pub fn error_k(args: ErrorArgs) -> Result<i32, CliError> {
    let c = common(&args.common.output)?;
    let l = &c.layers;
    let s = settings(l, &args.common)?;
    let ns = l.get(args.n, "n", IntList(vec![400]))?.0;
    let [n] = ns[..] else {
        return Err(CliError::Input("error-vs-k takes a single --n".into()));
    };
    let ks = l.get(args.k, "k", IntList((1..=39).collect()))?.0;
    let reps = l.get(args.reps, "reps", 100)?;
    let rows = stream(&c, ERROR_HEADER, |on| error_vs_k(n, &ks, reps, c.seed, &s, on))?;
    if let Some(path) = &c.svg {
        error_svg(path, &rows, false)?;
    }
    Ok(diverged_exit(rows.iter().filter(|r| r.status == SolveStatus::Diverged).count()))
}

#[derive(Serialize)]
struct BoundRow {
    p: usize,
    k: usize,
    trials: usize,
    mean: f64,
    std_error: f64,
    bound: f64,
    margin: f64,
    length_bracket: Option<bool>,
    passed: bool,
}

pub fn validate_bounds(args: BoundsArgs) -> Result<i32, CliError> {
    let c = common(&args.output)?;
    let default_pairs = PairList(vec![(100, 1), (100, 5), (600, 10), (600, 50), (100, 100), (600, 600)]);
    let pairs = c.layers.get(args.pairs, "pairs", default_pairs)?.0;
    let trials = c.layers.get(args.reps, "reps", 10_000)?;
    let checks = experiments::validate_bounds(&pairs, trials, c.seed).map_err(input)?;
    // Verdict lines go to stdout unless stdout carries the JSON document.
    let json_on_stdout = c.out.is_none() && c.format == Format::Json;
    let mut failed = 0;
    for ch in &checks {
        let verdict = if ch.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!ch.passed);
        let bracket = match ch.length_bracket {
            Some(true) => ", inside length bracket",
            Some(false) => ", outside length bracket",
            None => "",
        };
        let line = format!(
            "{verdict} p={} k={}: E[R*(g)] ~ {:.4} +- {:.4} <= bound {:.4} (margin {:.4}{bracket})",
            ch.p, ch.k, ch.estimate.mean, ch.estimate.std_error, ch.bound, ch.margin
        );
        if json_on_stdout {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
    if c.out.is_some() || json_on_stdout {
        stream(&c, BOUNDS_HEADER, |on| {
            for ch in &checks {
                on(&BoundRow {
                    p: ch.p,
                    k: ch.k,
                    trials: ch.estimate.trials,
                    mean: ch.estimate.mean,
                    std_error: ch.estimate.std_error,
                    bound: ch.bound,
                    margin: ch.margin,
                    length_bracket: ch.length_bracket,
                    passed: ch.passed,
                });
            }
            Ok(())
        })?;
    }
    Ok(if failed > 0 { EXIT_INTERNAL } else { 0 })
}
