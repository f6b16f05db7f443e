use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gds(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gds"))
        .current_dir(dir)
        .env_remove("GDS_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn numbers(text: &str) -> Vec<f64> {
    text.lines().map(|l| l.trim().parse().unwrap()).collect()
}

fn identity_problem(dir: &Path, y: &[f64]) {
    let p = y.len();
    let rows: Vec<String> = (0..p)
        .map(|i| (0..p).map(|j| if i == j { "1" } else { "0" }).collect::<Vec<_>>().join(","))
        .collect();
    fs::write(dir.join("X.csv"), rows.join("\n") + "\n").unwrap();
    let ys: Vec<String> = y.iter().map(|v| v.to_string()).collect();
    fs::write(dir.join("y.csv"), ys.join("\n") + "\n").unwrap();
}

#[test]
fn l1_solve_on_identity_design_soft_thresholds() {
    let dir = TempDir::new().unwrap();
    let y = [3.0, -0.5, 1.5, -2.25];
    identity_problem(dir.path(), &y);
    let o = gds(dir.path(), &["solve", "--design", "X.csv", "--response", "y.csv", "--norm", "l1", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let theta = numbers(&stdout(&o));
    let expected: Vec<f64> = y.iter().map(|v: &f64| v.signum() * (v.abs() - 1.0).max(0.0)).collect();
    for (a, b) in theta.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-5, "{theta:?} vs {expected:?}");
    }
}

#[test]
fn large_lambda_gives_zero_and_writes_report() {
    let dir = TempDir::new().unwrap();
    identity_problem(dir.path(), &[3.0, -0.5, 1.5]);
    let o = gds(
        dir.path(),
        &["solve", "--design", "X.csv", "--response", "y.csv", "--norm", "ksup", "--k", "2", "--lambda", "10", "--out", "t.txt"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let theta = numbers(&fs::read_to_string(dir.path().join("t.txt")).unwrap());
    assert!(theta.iter().all(|v| v.abs() < 1e-8), "{theta:?}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("t.txt.report.json")).unwrap()).unwrap();
    assert_eq!(report["converged"], true);
    assert_eq!(report["norm"], "ksup");
}

#[test]
fn malformed_input_exits_one_with_location() {
    let dir = TempDir::new().unwrap();
    identity_problem(dir.path(), &[1.0, 2.0]);
    fs::write(dir.path().join("bad.csv"), "1,0\n0,oops\n").unwrap();
    let o = gds(dir.path(), &["solve", "--design", "bad.csv", "--response", "y.csv", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.csv:2"), "{}", stderr(&o));

    let o = gds(dir.path(), &["solve", "--design", "X.csv", "--response", "y.csv", "--lambda", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = gds(dir.path(), &["solve", "--design", "X.csv", "--response", "y.csv", "--norm", "ksup", "--k", "5", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = gds(dir.path(), &["solve", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn iteration_cap_exits_two() {
    let dir = TempDir::new().unwrap();
    identity_problem(dir.path(), &[3.0, -0.5, 1.5]);
    let o = gds(
        dir.path(),
        &["solve", "--design", "X.csv", "--response", "y.csv", "--lambda", "0.01", "--max-iters", "2", "--mu", "100"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not converged"));
}

fn csv_body(text: &str, header: &str) -> usize {
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], header);
    let last = lines.last().unwrap();
    assert!(last.starts_with("# complete rows="), "{last}");
    let rows: usize = last.trim_start_matches("# complete rows=").parse().unwrap();
    assert_eq!(rows, lines.len() - 2);
    rows
}

#[test]
fn bench_prox_streams_csv() {
    let dir = TempDir::new().unwrap();
    let o = gds(dir.path(), &["bench-prox", "--p", "100,200", "--ratio", "10", "--reps", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(csv_body(&stdout(&o), "p,k,method,mean_ns,sd_ns"), 4);
}

#[test]
fn experiments_are_deterministic_and_plot() {
    let dir = TempDir::new().unwrap();
    let roc = ["roc", "--n", "30", "--k", "1,5", "--lambda-points", "3", "--max-iters", "30", "--seed", "4"];
    let a = gds(dir.path(), &roc);
    let b = gds(dir.path(), &roc);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(csv_body(&stdout(&a), "k,seed,lambda,tpr,fpr,l2_error,iters,status"), 6);
    assert_eq!(stdout(&a), stdout(&b));

    let o = gds(
        dir.path(),
        &["error-vs-n", "--n", "20,40", "--k", "1", "--reps", "2", "--max-iters", "20", "--out", "n.csv", "--svg", "n.svg"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("n.csv")).unwrap();
    assert_eq!(csv_body(&text, "n,k,rep,seed,lambda,l2_error,iters,status"), 4);
    let svg = fs::read_to_string(dir.path().join("n.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
}

#[test]
fn seed_precedence_flag_over_config_over_env() {
    let dir = TempDir::new().unwrap();
    let run = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_gds"));
        cmd.current_dir(dir.path()).env_remove("GDS_SEED");
        if let Some(s) = env {
            cmd.env("GDS_SEED", s);
        }
        cmd.args(["error-vs-k", "--n", "20", "--k", "1-2", "--reps", "1", "--format", "json"]).args(extra);
        let o = cmd.output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(doc["complete"], true);
        doc["rows"][0]["seed"].as_u64().unwrap()
    };
    fs::write(dir.path().join("c.json"), r#"{"seed": 77, "max_iters": 10}"#).unwrap();
    assert_eq!(run(&["--max-iters", "10"], Some("55")), 55);
    assert_eq!(run(&["--config", "c.json"], Some("55")), 77);
    assert_eq!(run(&["--config", "c.json", "--seed", "99"], Some("55")), 99);

    let o = gds(dir.path(), &["error-vs-k", "--n", "20", "--k", "1", "--reps", "1", "--config", "c.json", "--max-iters", "many"]);
    assert_eq!(o.status.code(), Some(1));
    fs::write(dir.path().join("broken.json"), "{\"seed\": }").unwrap();
    let o = gds(dir.path(), &["error-vs-k", "--n", "20", "--k", "1", "--config", "broken.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("broken.json"));
}

#[test]
fn validate_bounds_reports_pass() {
    let dir = TempDir::new().unwrap();
    let o = gds(dir.path(), &["validate-bounds", "--pairs", "50:1,50:5", "--reps", "300", "--out", "b.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.matches("PASS").count(), 2, "{out}");
    let text = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(csv_body(&text, "p,k,trials,mean,std_error,bound,margin,length_bracket,passed"), 2);
}
