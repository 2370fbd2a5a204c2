//! Epsilon-insensitive support vector regression.
//!
//! Solves the dual box QP by sequential minimal optimization over the
//! doubled variable vector `α = [a; a*]` with the single equality
//! constraint `Σa − Σa* = 0`, selecting maximal-violating pairs until the
//! KKT gap drops below tolerance. Predictions follow
//! `f(x) = Σ(a_i − a_i*)·K(x_i, x) + b`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kernel")]
pub enum Kernel {
    Linear,
    /// `K(x, x') = exp(−γ‖x − x'‖²)`
    Rbf { gamma: f64 },
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Kernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            Kernel::Rbf { gamma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-gamma * d2).exp()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SvrModel {
    pub kernel: Kernel,
    pub c: f64,
    pub epsilon: f64,
    /// `β_i = a_i − a_i*` per training row, in `[−C, C]`.
    pub dual_coefficients: Vec<f64>,
    pub bias: f64,
    /// Standardized training rows the kernel sums range over.
    pub support_rows: Vec<Vec<f64>>,
    /// Training targets (raw scale), kept for diagnostics.
    pub targets: Vec<f64>,
    pub feature_means: Vec<f64>,
    pub feature_stds: Vec<f64>,
    /// Dual objective value at the returned iterate (maximization form).
    pub dual_objective: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Fit epsilon-SVR. Features are standardized internally; `tol` bounds the
/// maximal KKT violation (the pipeline default is 1e-3). A hit iteration
/// budget returns the best iterate with `converged = false`.
pub fn fit_svr(
    xs: &[Vec<f64>],
    ys: &[f64],
    kernel: Kernel,
    c: f64,
    epsilon: f64,
    tol: f64,
    max_iter: usize,
) -> Result<SvrModel> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::degenerate("SVR needs matching non-empty rows and targets"));
    }
    if c <= 0.0 || epsilon < 0.0 {
        return Err(Error::invalid("SVR requires C > 0 and epsilon >= 0"));
    }
    let n = xs.len();
    let width = xs[0].len();

    // Standardize features; constant columns map to zero.
    let mut means = vec![0.0; width];
    let mut stds = vec![0.0; width];
    for j in 0..width {
        let mu = xs.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let var = xs.iter().map(|r| (r[j] - mu) * (r[j] - mu)).sum::<f64>() / n as f64;
        means[j] = mu;
        stds[j] = var.sqrt();
    }
    let standardized: Vec<Vec<f64>> = xs
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(j, v)| if stds[j] > 0.0 { (v - means[j]) / stds[j] } else { 0.0 })
                .collect()
        })
        .collect();

    // Kernel matrix over the standardized rows.
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = kernel.eval(&standardized[i], &standardized[j]);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }

    // Doubled variables: t < n are a_i (sign +1), t >= n are a_i* (sign −1).
    // Objective: min ½αᵀQα + pᵀα with Q_ts = z_t z_s K_{t%n, s%n} and
    // p_t = ε − z_t y_{t%n}.
    let sign = |t: usize| if t < n { 1.0 } else { -1.0 };
    let mut alpha = vec![0.0; 2 * n];
    let mut grad: Vec<f64> = (0..2 * n).map(|t| epsilon - sign(t) * ys[t % n]).collect();

    let q = |t: usize, s: usize| sign(t) * sign(s) * k[(t % n) * n + (s % n)];

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;

        // Maximal violating pair over the feasible directions.
        let mut i_up: Option<(usize, f64)> = None;
        let mut i_low: Option<(usize, f64)> = None;
        for t in 0..2 * n {
            let z = sign(t);
            let v = -z * grad[t];
            let can_up = (z > 0.0 && alpha[t] < c) || (z < 0.0 && alpha[t] > 0.0);
            let can_low = (z > 0.0 && alpha[t] > 0.0) || (z < 0.0 && alpha[t] < c);
            if can_up && i_up.is_none_or(|(_, best)| v > best) {
                i_up = Some((t, v));
            }
            if can_low && i_low.is_none_or(|(_, best)| v < best) {
                i_low = Some((t, v));
            }
        }
        let (Some((i, m_up)), Some((j, m_low))) = (i_up, i_low) else {
            converged = true;
            break;
        };
        if m_up - m_low < tol {
            converged = true;
            break;
        }

        // Two-variable subproblem along the equality constraint:
        // α_i moves by z_i·d, α_j by −z_j·d.
        let zi = sign(i);
        let zj = sign(j);
        let eta = (q(i, i) + q(j, j) - 2.0 * zi * zj * q(i, j)).max(1e-12);
        let mut d = (m_up - m_low) / eta;
        // Box caps for both coordinates.
        let cap_i = if zi > 0.0 { c - alpha[i] } else { alpha[i] };
        let cap_j = if zj > 0.0 { alpha[j] } else { c - alpha[j] };
        d = d.min(cap_i).min(cap_j);
        if d <= 0.0 {
            converged = true;
            break;
        }
        let delta_i = zi * d;
        let delta_j = -zj * d;
        alpha[i] += delta_i;
        alpha[j] += delta_j;
        for (t, g) in grad.iter_mut().enumerate() {
            *g += q(t, i) * delta_i + q(t, j) * delta_j;
        }
    }

    // Bias from the free variables' KKT condition; fall back to the
    // violating-pair midpoint when everything sits on a bound.
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut up_best = f64::NEG_INFINITY;
    let mut low_best = f64::INFINITY;
    for t in 0..2 * n {
        let z = sign(t);
        let v = -z * grad[t];
        if alpha[t] > 0.0 && alpha[t] < c {
            free_sum += v;
            free_count += 1;
        }
        let can_up = (z > 0.0 && alpha[t] < c) || (z < 0.0 && alpha[t] > 0.0);
        let can_low = (z > 0.0 && alpha[t] > 0.0) || (z < 0.0 && alpha[t] < c);
        if can_up {
            up_best = up_best.max(v);
        }
        if can_low {
            low_best = low_best.min(v);
        }
    }
    let bias = if free_count > 0 {
        free_sum / free_count as f64
    } else {
        (up_best + low_best) / 2.0
    };

    let dual_coefficients: Vec<f64> = (0..n).map(|i| alpha[i] - alpha[i + n]).collect();

    // Maximization-form objective value −(½αᵀQα + pᵀα), evaluated from the
    // maintained gradient: αᵀQα = αᵀ(G − p).
    let alpha_g: f64 = alpha.iter().zip(&grad).map(|(a, g)| a * g).sum();
    let alpha_p: f64 = alpha
        .iter()
        .enumerate()
        .map(|(t, a)| a * (epsilon - sign(t) * ys[t % n]))
        .sum();
    let dual_objective = -(0.5 * (alpha_g - alpha_p) + alpha_p);

    Ok(SvrModel {
        kernel,
        c,
        epsilon,
        dual_coefficients,
        bias,
        support_rows: standardized,
        targets: ys.to_vec(),
        feature_means: means,
        feature_stds: stds,
        dual_objective,
        converged,
        iterations,
    })
}

impl SvrModel {
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.feature_means.len() {
            return Err(Error::invalid(format!(
                "expected {} features, got {}",
                self.feature_means.len(),
                x.len()
            )));
        }
        let z: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if self.feature_stds[j] > 0.0 {
                    (v - self.feature_means[j]) / self.feature_stds[j]
                } else {
                    0.0
                }
            })
            .collect();
        let mut f = self.bias;
        for (beta, row) in self.dual_coefficients.iter().zip(&self.support_rows) {
            if *beta != 0.0 {
                f += beta * self.kernel.eval(row, &z);
            }
        }
        Ok(f)
    }
}
