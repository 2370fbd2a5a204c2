//! Exponential-smoothing forecasters: SES, Holt's linear trend, the annual
//! Holt-Winters variant, the Theta method, plus the Naive and Drift
//! baselines.

use crate::error::{Error, Result};

/// Grid used when smoothing weights are not fixed by the caller:
/// 0.05, 0.10, ..., 1.00, followed by a ternary refinement around the
/// best cell.
fn weight_grid() -> impl Iterator<Item = f64> {
    (1..=20).map(|i| i as f64 * 0.05)
}

fn refine<F: Fn(f64) -> f64>(mut lo: f64, mut hi: f64, f: F) -> f64 {
    for _ in 0..40 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    (lo + hi) / 2.0
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NaiveState {
    pub last: f64,
}

pub fn fit_naive(values: &[f64]) -> Result<NaiveState> {
    if values.is_empty() {
        return Err(Error::degenerate("naive needs at least 1 observation"));
    }
    Ok(NaiveState { last: *values.last().unwrap() })
}

pub fn forecast_naive(state: &NaiveState, horizon: usize) -> Vec<f64> {
    vec![state.last; horizon]
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DriftState {
    pub last: f64,
    pub slope: f64,
}

pub fn fit_drift(values: &[f64]) -> Result<DriftState> {
    if values.len() < 2 {
        return Err(Error::degenerate("drift needs at least 2 observations"));
    }
    let first = values[0];
    let last = *values.last().unwrap();
    let slope = (last - first) / (values.len() as f64 - 1.0);
    Ok(DriftState { last, slope })
}

pub fn forecast_drift(state: &DriftState, horizon: usize) -> Vec<f64> {
    (1..=horizon).map(|h| state.last + h as f64 * state.slope).collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SesState {
    pub alpha: f64,
    pub level: f64,
    pub sse: f64,
}

/// One-pass SES run returning the final level and one-step SSE.
fn ses_run(values: &[f64], alpha: f64) -> (f64, f64) {
    let mut level = values[0];
    let mut sse = 0.0;
    for &y in &values[1..] {
        let e = y - level;
        sse += e * e;
        level = alpha * y + (1.0 - alpha) * level;
    }
    (level, sse)
}

pub fn fit_ses(values: &[f64], alpha: Option<f64>) -> Result<SesState> {
    if values.len() < 3 {
        return Err(Error::degenerate("SES needs at least 3 observations"));
    }
    let alpha = match alpha {
        Some(a) => {
            if !(0.0 < a && a <= 1.0) {
                return Err(Error::invalid("SES alpha must lie in (0, 1]"));
            }
            a
        }
        None => {
            let best = weight_grid()
                .min_by(|&a, &b| {
                    ses_run(values, a).1.partial_cmp(&ses_run(values, b).1).unwrap()
                })
                .unwrap();
            refine((best - 0.05).max(1e-4), (best + 0.05).min(1.0), |a| ses_run(values, a).1)
        }
    };
    let (level, sse) = ses_run(values, alpha);
    Ok(SesState { alpha, level, sse })
}

pub fn forecast_ses(state: &SesState, horizon: usize) -> Vec<f64> {
    vec![state.level; horizon]
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HoltState {
    pub alpha: f64,
    pub beta: f64,
    pub level: f64,
    pub trend: f64,
    pub sse: f64,
}

/// Holt run. A zero trend weight disables the trend component entirely
/// (initial trend 0), collapsing the model to SES.
fn holt_run(values: &[f64], alpha: f64, beta: f64) -> (f64, f64, f64) {
    let mut level = values[0];
    let mut trend = if beta == 0.0 { 0.0 } else { values[1] - values[0] };
    let mut sse = 0.0;
    for &y in &values[1..] {
        let pred = level + trend;
        let e = y - pred;
        sse += e * e;
        let new_level = alpha * y + (1.0 - alpha) * (level + trend);
        trend = beta * (new_level - level) + (1.0 - beta) * trend;
        level = new_level;
    }
    (level, trend, sse)
}

pub fn fit_holt(values: &[f64], alpha: Option<f64>, beta: Option<f64>) -> Result<HoltState> {
    if values.len() < 4 {
        return Err(Error::degenerate("Holt needs at least 4 observations"));
    }
    for (name, w) in [("alpha", alpha), ("beta", beta)] {
        if let Some(v) = w {
            if !(0.0..=1.0).contains(&v) || (name == "alpha" && v == 0.0) {
                return Err(Error::invalid(format!("Holt {name} out of range")));
            }
        }
    }
    let (alpha, beta) = match (alpha, beta) {
        (Some(a), Some(b)) => (a, b),
        (fixed_a, fixed_b) => {
            let mut best = (f64::INFINITY, 0.5, 0.1);
            for a in fixed_a.map(|v| vec![v]).unwrap_or_else(|| weight_grid().collect()) {
                for b in fixed_b.map(|v| vec![v]).unwrap_or_else(|| weight_grid().collect()) {
                    let sse = holt_run(values, a, b).2;
                    if sse < best.0 {
                        best = (sse, a, b);
                    }
                }
            }
            let (_, a0, b0) = best;
            let a = if fixed_a.is_some() {
                a0
            } else {
                refine((a0 - 0.05).max(1e-4), (a0 + 0.05).min(1.0), |a| holt_run(values, a, b0).2)
            };
            let b = if fixed_b.is_some() {
                b0
            } else {
                refine((b0 - 0.05).max(0.0), (b0 + 0.05).min(1.0), |b| holt_run(values, a, b).2)
            };
            (a, b)
        }
    };
    let (level, trend, sse) = holt_run(values, alpha, beta);
    Ok(HoltState { alpha, beta, level, trend, sse })
}

pub fn forecast_holt(state: &HoltState, horizon: usize) -> Vec<f64> {
    (1..=horizon).map(|h| state.level + h as f64 * state.trend).collect()
}

/// Theta method state: the fitted linear trend of the theta-0 line plus
/// the SES state of the theta-2 line.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ThetaState {
    pub intercept: f64,
    pub slope: f64,
    /// Training length; forecasts extrapolate the line from here.
    pub n: usize,
    pub ses: SesState,
}

/// Classic two-line Theta: the theta-0 line is the OLS trend, the theta-2
/// line is `2y − line`, smoothed by SES; forecasts average the two.
pub fn fit_theta(values: &[f64], alpha: Option<f64>) -> Result<ThetaState> {
    let n = values.len();
    if n < 5 {
        return Err(Error::degenerate("Theta needs at least 5 observations"));
    }
    let t_mean = (n as f64 - 1.0) / 2.0;
    let y_mean = values.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, &y) in values.iter().enumerate() {
        let dt = i as f64 - t_mean;
        sxy += dt * (y - y_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    let theta2: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, &y)| 2.0 * y - (intercept + slope * i as f64))
        .collect();
    let ses = fit_ses(&theta2, alpha)?;
    Ok(ThetaState { intercept, slope, n, ses })
}

pub fn forecast_theta(state: &ThetaState, horizon: usize) -> Vec<f64> {
    (1..=horizon)
        .map(|h| {
            let line = state.intercept + state.slope * (state.n - 1 + h) as f64;
            0.5 * (line + state.ses.level)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_stores_last_value() {
        let s = fit_naive(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.last, 3.0);
        assert_eq!(forecast_naive(&s, 3), vec![3.0, 3.0, 3.0]);
    }

    #[test]
    fn drift_on_unit_slope() {
        let s = fit_drift(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(forecast_drift(&s, 2), vec![4.0, 5.0]);
    }

    #[test]
    fn ses_with_alpha_one_equals_naive() {
        let values = [4.0, 7.0, 2.0, 9.0, 5.0];
        let s = fit_ses(&values, Some(1.0)).unwrap();
        assert_eq!(s.level, 5.0);
    }

    #[test]
    fn holt_with_zero_beta_equals_ses() {
        let values = [4.0, 7.0, 2.0, 9.0, 5.0, 6.5, 4.2];
        let holt = fit_holt(&values, Some(0.3), Some(0.0)).unwrap();
        let ses = fit_ses(&values, Some(0.3)).unwrap();
        assert!((holt.level - ses.level).abs() < 1e-12);
        let fh = forecast_holt(&holt, 4);
        let fs = forecast_ses(&ses, 4);
        for (a, b) in fh.iter().zip(&fs) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn holt_continues_exact_ramp() {
        let values: Vec<f64> = (0..20).map(|t| 2.0 * t as f64 + 1.0).collect();
        let s = fit_holt(&values, None, None).unwrap();
        let f = forecast_holt(&s, 3);
        for (h, v) in f.iter().enumerate() {
            let expected = 2.0 * (20 + h) as f64 + 1.0;
            assert!((v - expected).abs() < 1e-6, "h={h}: {v} vs {expected}");
        }
    }

    #[test]
    fn theta_halves_line_and_ses() {
        let values: Vec<f64> = (0..30).map(|t| 0.5 * t as f64 + (t % 3) as f64).collect();
        let s = fit_theta(&values, None).unwrap();
        let f = forecast_theta(&s, 2);
        let line1 = s.intercept + s.slope * 30.0;
        assert!((f[0] - 0.5 * (line1 + s.ses.level)).abs() < 1e-12);
    }

    #[test]
    fn short_series_are_rejected() {
        assert!(fit_naive(&[]).is_err());
        assert!(fit_drift(&[1.0]).is_err());
        assert!(fit_ses(&[1.0, 2.0], None).is_err());
        assert!(fit_holt(&[1.0, 2.0, 3.0], None, None).is_err());
        assert!(fit_theta(&[1.0, 2.0, 3.0, 4.0], None).is_err());
    }
}
