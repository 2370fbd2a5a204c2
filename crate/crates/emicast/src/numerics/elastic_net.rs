//! Coordinate-descent solver for L1/L2-penalized least squares.

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Penalized least-squares fit on the original (de-standardized) scale.
#[derive(Debug, Clone)]
pub struct ElasticNetFit {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    /// False when coordinate descent hit `max_iter` before the coefficient
    /// changes dropped below tolerance.
    pub converged: bool,
    pub iterations: usize,
}

impl ElasticNetFit {
    pub fn predict_row(&self, x: &[f64]) -> f64 {
        self.intercept + self.coefficients.iter().zip(x).map(|(b, v)| b * v).sum::<f64>()
    }
}

#[inline]
fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

/// Minimizes `‖y − β₀ − Xβ‖² + l1·‖β‖₁ + l2·‖β‖₂²` by cyclic coordinate
/// descent. Columns are standardized to zero mean and unit variance
/// internally and coefficients are mapped back on output, so the penalties
/// weigh every column equally regardless of its raw scale. Constant columns
/// receive a zero coefficient.
///
/// `l1 = l2 = 0` reproduces OLS; `l1 = 0` reproduces ridge.
pub fn elastic_net(
    x: &Matrix,
    y: &[f64],
    l1: f64,
    l2: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ElasticNetFit> {
    if y.len() != x.rows() {
        return Err(Error::invalid("target length does not match design rows"));
    }
    if x.rows() == 0 {
        return Err(Error::degenerate("empty design"));
    }
    if l1 < 0.0 || l2 < 0.0 {
        return Err(Error::invalid("penalties must be non-negative"));
    }
    let n = x.rows();
    let p = x.cols();

    // Standardize columns; remember which ones are constant.
    let mut means = vec![0.0; p];
    let mut stds = vec![0.0; p];
    let mut xs = Matrix::zeros(n, p);
    for j in 0..p {
        let col = x.column(j);
        let mu = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n as f64;
        let sd = var.sqrt();
        means[j] = mu;
        stds[j] = sd;
        if sd > 0.0 {
            for i in 0..n {
                xs.set(i, j, (col[i] - mu) / sd);
            }
        }
    }
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let yc: Vec<f64> = y.iter().map(|v| v - y_mean).collect();

    // Column squared norms of the standardized design (n for live columns).
    let znorm: Vec<f64> = (0..p)
        .map(|j| (0..n).map(|i| xs.get(i, j) * xs.get(i, j)).sum())
        .collect();

    let mut beta = vec![0.0; p];
    let mut resid = yc.clone();
    let mut converged = false;
    let mut iters = 0;

    for it in 0..max_iter {
        iters = it + 1;
        let mut max_delta: f64 = 0.0;
        for j in 0..p {
            if stds[j] == 0.0 {
                continue;
            }
            let old = beta[j];
            // rho includes column j's own current contribution.
            let mut rho = 0.0;
            for i in 0..n {
                rho += xs.get(i, j) * resid[i];
            }
            rho += znorm[j] * old;
            let new = soft_threshold(rho, l1 / 2.0) / (znorm[j] + l2);
            if new != old {
                let delta = new - old;
                for i in 0..n {
                    resid[i] -= delta * xs.get(i, j);
                }
                beta[j] = new;
                max_delta = max_delta.max(delta.abs());
            }
        }
        if max_delta < tol {
            converged = true;
            break;
        }
    }

    // Map back to the raw scale.
    let mut coefficients = vec![0.0; p];
    let mut intercept = y_mean;
    for j in 0..p {
        if stds[j] > 0.0 {
            coefficients[j] = beta[j] / stds[j];
            intercept -= coefficients[j] * means[j];
        }
    }

    Ok(ElasticNetFit { coefficients, intercept, converged, iterations: iters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ols_solve, RngStream};

    fn random_problem(seed: u64, n: usize, p: usize) -> (Matrix, Vec<f64>) {
        let mut rng = RngStream::new(seed).child("enet").rng();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.next_normal()).collect())
            .collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let truth: Vec<f64> = (0..p).map(|j| (j as f64) - 1.0).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| x.row(i).iter().zip(&truth).map(|(a, b)| a * b).sum::<f64>() + 0.1 * rng.next_normal())
            .collect();
        (x, y)
    }

    #[test]
    fn unpenalized_matches_ols() {
        let (x, y) = random_problem(5, 40, 3);
        let enet = elastic_net(&x, &y, 0.0, 0.0, 1e-10, 10_000).unwrap();
        let ols = ols_solve(&x, &y, true).unwrap();
        for (a, b) in enet.coefficients.iter().zip(&ols.coefficients) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        assert!((enet.intercept - ols.intercept).abs() < 1e-6);
    }

    #[test]
    fn huge_l1_shrinks_all_slopes_to_zero() {
        let (x, y) = random_problem(6, 30, 4);
        let enet = elastic_net(&x, &y, 1e9, 0.0, 1e-10, 10_000).unwrap();
        for b in &enet.coefficients {
            assert_eq!(*b, 0.0);
        }
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        assert!((enet.intercept - mean).abs() < 1e-9);
    }

    #[test]
    fn ridge_matches_closed_form_on_standardized_data() {
        // Pre-standardized columns and centered target make the internal
        // standardization a no-op, so the closed form (XᵀX + λI)⁻¹Xᵀy applies.
        let (raw, yraw) = random_problem(7, 50, 3);
        let n = raw.rows();
        let mut x = Matrix::zeros(n, raw.cols());
        for j in 0..raw.cols() {
            let col = raw.column(j);
            let mu = col.iter().sum::<f64>() / n as f64;
            let sd = (col.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n as f64).sqrt();
            for i in 0..n {
                x.set(i, j, (col[i] - mu) / sd);
            }
        }
        let ymu = yraw.iter().sum::<f64>() / n as f64;
        let y: Vec<f64> = yraw.iter().map(|v| v - ymu).collect();

        let lambda = 3.5;
        let enet = elastic_net(&x, &y, 0.0, lambda, 1e-12, 50_000).unwrap();

        let mut gram = x.gram();
        for i in 0..gram.rows() {
            gram.set(i, i, gram.get(i, i) + lambda);
        }
        let xty = x.transpose_mul_vec(&y);
        let closed = crate::numerics::matrix::cholesky_solve(&gram, &xty).unwrap();
        for (a, b) in enet.coefficients.iter().zip(&closed) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn objective_beats_random_probes() {
        // An 8x3 problem: coordinate descent's objective value must not be
        // beaten by any of 100k random coefficient probes.
        let (x, y) = random_problem(11, 8, 3);
        let l1 = 0.7;
        let l2 = 0.4;
        let enet = elastic_net(&x, &y, l1, l2, 1e-12, 100_000).unwrap();

        let objective = |slopes: &[f64], intercept: f64| -> f64 {
            let mut sse = 0.0;
            for i in 0..x.rows() {
                let pred = intercept + x.row(i).iter().zip(slopes).map(|(a, b)| a * b).sum::<f64>();
                let e = y[i] - pred;
                sse += e * e;
            }
            // Penalties act on the standardized scale used by the solver.
            let mut pen = 0.0;
            for j in 0..x.cols() {
                let col = x.column(j);
                let mu = col.iter().sum::<f64>() / col.len() as f64;
                let sd = (col.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / col.len() as f64)
                    .sqrt();
                let b_std = slopes[j] * sd;
                pen += l1 * b_std.abs() + l2 * b_std * b_std;
            }
            sse + pen
        };

        let best = objective(&enet.coefficients, enet.intercept);
        let mut rng = RngStream::new(99).child("probe").rng();
        for _ in 0..100_000 {
            let slopes: Vec<f64> = (0..3).map(|_| rng.next_range(-3.0, 3.0)).collect();
            let intercept = rng.next_range(-3.0, 3.0);
            let probe = objective(&slopes, intercept);
            assert!(probe >= best - 1e-9, "probe {probe} beat solution {best}");
        }
    }

    #[test]
    fn constant_column_gets_zero_coefficient() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![2.0, i as f64]).collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let y: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let enet = elastic_net(&x, &y, 0.1, 0.1, 1e-10, 10_000).unwrap();
        assert_eq!(enet.coefficients[0], 0.0);
    }
}
