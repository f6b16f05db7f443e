//! Test-only oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

/// Dense two-phase simplex with Bland's rule for
/// `min c^T x  s.t.  G x <= h, x >= 0`. Returns the optimal `x`.
pub fn simplex_min(c: &[f64], g: &DMatrix<f64>, h: &[f64]) -> Option<Vec<f64>> {
    const EPS: f64 = 1e-11;
    let (m, n) = (g.nrows(), g.ncols());
    // columns: x (n), slack (m), artificial (m), rhs
    let width = n + 2 * m + 1;
    let mut t = vec![vec![0.0; width]; m];
    let mut basis = vec![0usize; m];
    for i in 0..m {
        let sign = if h[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sign * g[(i, j)];
        }
        t[i][n + i] = sign;
        t[i][n + m + i] = 1.0;
        t[i][width - 1] = sign * h[i];
        basis[i] = n + m + i;
    }

    let pivot = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, r: usize, col: usize| {
        let p = t[r][col];
        for v in t[r].iter_mut() {
            *v /= p;
        }
        for i in 0..t.len() {
            if i != r && t[i][col] != 0.0 {
                let f = t[i][col];
                for j in 0..t[i].len() {
                    t[i][j] -= f * t[r][j];
                }
            }
        }
        basis[r] = col;
    };

    let run = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, cost: &[f64], allowed: usize| -> bool {
        loop {
            // reduced costs
            let mut enter = None;
            for j in 0..allowed {
                if basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j];
                for i in 0..m {
                    rc -= cost[basis[i]] * t[i][j];
                }
                if rc < -EPS {
                    enter = Some(j);
                    break;
                }
            }
            let Some(col) = enter else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                if t[i][col] > EPS {
                    let ratio = t[i][width - 1] / t[i][col];
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => ratio < lr - EPS || (ratio <= lr + EPS && basis[i] < basis[li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            pivot(t, basis, r, col);
        }
    };

    let mut phase1 = vec![0.0; n + 2 * m];
    for j in n + m..n + 2 * m {
        phase1[j] = 1.0;
    }
    run(&mut t, &mut basis, &phase1, n + 2 * m);
    let infeas: f64 = (0..m).filter(|&i| basis[i] >= n + m).map(|i| t[i][width - 1]).sum();
    if infeas > 1e-8 {
        return None;
    }
    // drive zero-level artificials out of the basis
    for i in 0..m {
        if basis[i] >= n + m {
            if let Some(col) = (0..n + m).find(|&j| t[i][j].abs() > EPS) {
                pivot(&mut t, &mut basis, i, col);
            }
        }
    }
    let mut phase2 = vec![0.0; n + 2 * m];
    phase2[..n].copy_from_slice(c);
    if !run(&mut t, &mut basis, &phase2, n + m) {
        return None;
    }
    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][width - 1];
        }
    }
    Some(x)
}

/// Optimal value of `min ||theta||_1  s.t.  ||u - A theta||_inf <= lambda`
/// via the split `theta = a - b`, `a, b >= 0`.
pub fn l1_dantzig_lp(a: &DMatrix<f64>, u: &DVector<f64>, lambda: f64) -> Option<(f64, Vec<f64>)> {
    let p = a.ncols();
    let mut g = DMatrix::zeros(2 * p, 2 * p);
    let mut h = vec![0.0; 2 * p];
    for i in 0..p {
        for j in 0..p {
            g[(i, j)] = a[(i, j)];
            g[(i, p + j)] = -a[(i, j)];
            g[(p + i, j)] = -a[(i, j)];
            g[(p + i, p + j)] = a[(i, j)];
        }
        h[i] = u[i] + lambda;
        h[p + i] = lambda - u[i];
    }
    let x = simplex_min(&vec![1.0; 2 * p], &g, &h)?;
    let theta: Vec<f64> = (0..p).map(|i| x[i] - x[p + i]).collect();
    Some((theta.iter().map(|v| v.abs()).sum(), theta))
}
