use gds::ksup_prox::project_dual_ball_naive;
use gds_demo_wasm::{lambda_path, projection, width_curve};

#[test]
fn projection_agrees_with_the_naive_route() {
    let x: Vec<f64> = (0..25).map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.7).collect();
    for k in [1, 3, 10, 25] {
        let fast = projection(&x, k, 2.0).unwrap();
        let naive = project_dual_ball_naive(&x, k, 2.0).unwrap();
        for (a, b) in fast.w.iter().zip(&naive) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn path_recovers_the_groups_at_small_lambda() {
    let path = lambda_path(60, 4, 8, 7).unwrap();
    let last = &path.coefs[path.coefs.len() - path.p..];
    let truth_norm: f64 = path.truth.iter().map(|v| v * v).sum::<f64>().sqrt();
    let err: f64 = last.iter().zip(&path.truth).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    assert!(err < 0.2 * truth_norm, "error {err} vs norm {truth_norm}");
    assert!(path.lambdas.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn invalid_inputs_are_errors() {
    assert!(projection(&[1.0, 2.0], 3, 1.0).is_err());
    assert!(lambda_path(30, 0, 5, 1).is_err());
    assert!(width_curve(0, 10, 1).is_err());
}
