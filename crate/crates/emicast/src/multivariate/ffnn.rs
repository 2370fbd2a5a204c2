//! Single-hidden-layer feedforward network trained by full-batch gradient
//! descent on mean squared error.
//!
//! Hidden units compute `tanh(Σ w_jk x_j + b_k)`; the output is a linear
//! combination of the hidden activations. Inputs and targets are
//! standardized internally and predictions are mapped back on output.

use crate::error::{Error, Result};
use crate::numerics::RngStream;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FfnnModel {
    pub n_inputs: usize,
    pub hidden: usize,
    /// Input-to-hidden weights, `hidden × n_inputs`, row-major by unit.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// Hidden-to-output weights.
    pub w2: Vec<f64>,
    pub b2: f64,
    pub x_means: Vec<f64>,
    pub x_stds: Vec<f64>,
    pub y_mean: f64,
    pub y_std: f64,
    /// Standardized-space training MSE per epoch.
    pub loss_trace: Vec<f64>,
    pub seed: u64,
}

/// Flat parameter order used by the gradient: w1, b1, w2, b2.
fn param_count(n_inputs: usize, hidden: usize) -> usize {
    hidden * n_inputs + hidden + hidden + 1
}

fn forward(model: &FfnnModel, z: &[f64]) -> (Vec<f64>, f64) {
    let mut h = Vec::with_capacity(model.hidden);
    for k in 0..model.hidden {
        let mut u = model.b1[k];
        for (j, &x) in z.iter().enumerate() {
            u += model.w1[k * model.n_inputs + j] * x;
        }
        h.push(u.tanh());
    }
    let y = model.b2 + model.w2.iter().zip(&h).map(|(w, a)| w * a).sum::<f64>();
    (h, y)
}

/// MSE over the standardized training set.
fn loss(model: &FfnnModel, zs: &[Vec<f64>], ts: &[f64]) -> f64 {
    let n = zs.len() as f64;
    zs.iter()
        .zip(ts)
        .map(|(z, &t)| {
            let (_, y) = forward(model, z);
            (y - t) * (y - t)
        })
        .sum::<f64>()
        / n
}

/// Analytic gradient of the standardized-space MSE, flattened in the order
/// w1, b1, w2, b2.
fn gradient(model: &FfnnModel, zs: &[Vec<f64>], ts: &[f64]) -> Vec<f64> {
    let n_in = model.n_inputs;
    let h_n = model.hidden;
    let n = zs.len() as f64;
    let mut g = vec![0.0; param_count(n_in, h_n)];
    let (gw1, rest) = g.split_at_mut(h_n * n_in);
    let (gb1, rest) = rest.split_at_mut(h_n);
    let (gw2, gb2) = rest.split_at_mut(h_n);
    for (z, &t) in zs.iter().zip(ts) {
        let (h, y) = forward(model, z);
        let dy = 2.0 * (y - t) / n;
        gb2[0] += dy;
        for k in 0..h_n {
            gw2[k] += dy * h[k];
            let du = dy * model.w2[k] * (1.0 - h[k] * h[k]);
            gb1[k] += du;
            for (j, &x) in z.iter().enumerate() {
                gw1[k * n_in + j] += du * x;
            }
        }
    }
    g
}

fn apply_step(model: &mut FfnnModel, grad: &[f64], lr: f64) {
    let n_in = model.n_inputs;
    let h_n = model.hidden;
    let (gw1, rest) = grad.split_at(h_n * n_in);
    let (gb1, rest) = rest.split_at(h_n);
    let (gw2, gb2) = rest.split_at(h_n);
    for (w, g) in model.w1.iter_mut().zip(gw1) {
        *w -= lr * g;
    }
    for (b, g) in model.b1.iter_mut().zip(gb1) {
        *b -= lr * g;
    }
    for (w, g) in model.w2.iter_mut().zip(gw2) {
        *w -= lr * g;
    }
    model.b2 -= lr * gb2[0];
}

/// Fit the network. `epochs = 0` is the initialization-only hook used by
/// determinism tests; the model zoo validates `epochs >= 1` before calling.
pub fn fit_ffnn(
    xs: &[Vec<f64>],
    ys: &[f64],
    hidden: usize,
    learning_rate: f64,
    epochs: usize,
    seed: u64,
) -> Result<FfnnModel> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::degenerate("FFNN needs matching non-empty rows and targets"));
    }
    if hidden == 0 {
        return Err(Error::invalid("FFNN needs at least one hidden unit"));
    }
    let n = xs.len();
    let n_inputs = xs[0].len();

    let mut x_means = vec![0.0; n_inputs];
    let mut x_stds = vec![0.0; n_inputs];
    for j in 0..n_inputs {
        let mu = xs.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let var = xs.iter().map(|r| (r[j] - mu) * (r[j] - mu)).sum::<f64>() / n as f64;
        x_means[j] = mu;
        x_stds[j] = var.sqrt();
    }
    let y_mean = ys.iter().sum::<f64>() / n as f64;
    let y_var = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum::<f64>() / n as f64;
    let y_std = if y_var > 0.0 { y_var.sqrt() } else { 1.0 };

    let zs: Vec<Vec<f64>> = xs
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(j, v)| if x_stds[j] > 0.0 { (v - x_means[j]) / x_stds[j] } else { 0.0 })
                .collect()
        })
        .collect();
    let ts: Vec<f64> = ys.iter().map(|y| (y - y_mean) / y_std).collect();

    // Glorot-uniform weights from the seeded stream, biases zero. The draw
    // order (w1 row-major, then w2) is part of the reproducibility contract.
    let mut rng = RngStream::new(seed).child("ffnn-init").rng();
    let bound1 = (6.0 / (n_inputs + hidden) as f64).sqrt();
    let w1: Vec<f64> = (0..hidden * n_inputs).map(|_| rng.next_range(-bound1, bound1)).collect();
    let bound2 = (6.0 / (hidden + 1) as f64).sqrt();
    let w2: Vec<f64> = (0..hidden).map(|_| rng.next_range(-bound2, bound2)).collect();

    let mut model = FfnnModel {
        n_inputs,
        hidden,
        w1,
        b1: vec![0.0; hidden],
        w2,
        b2: 0.0,
        x_means,
        x_stds,
        y_mean,
        y_std,
        loss_trace: Vec::with_capacity(epochs),
        seed,
    };

    for epoch in 0..epochs {
        let g = gradient(&model, &zs, &ts);
        apply_step(&mut model, &g, learning_rate);
        let l = loss(&model, &zs, &ts);
        if !l.is_finite() {
            return Err(Error::Divergence { epoch });
        }
        model.loss_trace.push(l);
    }
    Ok(model)
}

impl FfnnModel {
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_inputs {
            return Err(Error::invalid(format!(
                "expected {} inputs, got {}",
                self.n_inputs,
                x.len()
            )));
        }
        let z: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if self.x_stds[j] > 0.0 { (v - self.x_means[j]) / self.x_stds[j] } else { 0.0 }
            })
            .collect();
        let (_, y) = forward(self, &z);
        Ok(y * self.y_std + self.y_mean)
    }
}

/// Central finite-difference gradient used by the correctness tests.
#[cfg(test)]
fn numerical_gradient(model: &FfnnModel, zs: &[Vec<f64>], ts: &[f64], step: f64) -> Vec<f64> {
    let mut probe = model.clone();
    let n_in = model.n_inputs;
    let h_n = model.hidden;
    let total = param_count(n_in, h_n);
    let mut g = vec![0.0; total];
    for idx in 0..total {
        let bump = |m: &mut FfnnModel, delta: f64| {
            if idx < h_n * n_in {
                m.w1[idx] += delta;
            } else if idx < h_n * n_in + h_n {
                m.b1[idx - h_n * n_in] += delta;
            } else if idx < h_n * n_in + 2 * h_n {
                m.w2[idx - h_n * n_in - h_n] += delta;
            } else {
                m.b2 += delta;
            }
        };
        bump(&mut probe, step);
        let up = loss(&probe, zs, ts);
        bump(&mut probe, -2.0 * step);
        let down = loss(&probe, zs, ts);
        bump(&mut probe, step);
        g[idx] = (up - down) / (2.0 * step);
    }
    g
}
