//! ARIMA via conditional sum of squares.
//!
//! The first `p` observations of the differenced series are conditioned
//! away and the MA recursion starts from zero errors; the resulting SSE is
//! minimized with the simplex optimizer. Exact-likelihood (Kalman)
//! estimation is deliberately out of scope at this data size.

use crate::error::{Error, Result};
use crate::numerics::nelder_mead;
use crate::series::TimeSeries;
use crate::stattests::is_stationary;

/// Fitted ARIMA state: orders, coefficients, and the series tails needed
/// to forecast and to undo the model's internal differencing.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ArimaState {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub constant: bool,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub intercept: f64,
    /// Last values of the differenced series, most recent last (length ≥ p).
    pub w_tail: Vec<f64>,
    /// Last residuals, most recent last (length ≥ q).
    pub e_tail: Vec<f64>,
    /// Last `d + 1` level observations, used to invert the differencing.
    pub level_tail: Vec<f64>,
    pub sse: f64,
    /// Number of residuals entering the SSE.
    pub n_eff: usize,
    pub converged: bool,
}

/// CSS residuals for fixed coefficients. Residuals before index `p` are
/// zero by convention.
fn css_residuals(w: &[f64], p: usize, ar: &[f64], ma: &[f64], c: f64) -> Vec<f64> {
    let m = w.len();
    let mut e = vec![0.0; m];
    for t in p..m {
        let mut pred = c;
        for (i, &phi) in ar.iter().enumerate() {
            pred += phi * w[t - 1 - i];
        }
        for (j, &theta) in ma.iter().enumerate() {
            if t >= p + 1 + j {
                pred += theta * e[t - 1 - j];
            }
        }
        e[t] = w[t] - pred;
    }
    e
}

fn css_sse(e: &[f64], from: usize) -> f64 {
    e[from..].iter().map(|v| v * v).sum()
}

/// Schur-Cohn stationarity check via the Levinson step-down recursion:
/// the AR recursion `y_t = Σ φ_i y_{t−i} + e_t` is stationary iff every
/// reflection coefficient stays inside the unit interval.
fn ar_stationary(phi: &[f64]) -> bool {
    let mut a = phi.to_vec();
    for m in (1..=a.len()).rev() {
        let k = a[m - 1];
        if k.abs() >= 1.0 - 1e-8 {
            return false;
        }
        let denom = 1.0 - k * k;
        let prev: Vec<f64> = (0..m - 1)
            .map(|i| (a[i] + k * a[m - 2 - i]) / denom)
            .collect();
        a[..m - 1].copy_from_slice(&prev);
    }
    true
}

/// MA invertibility: `1 + Σ θ_j z^j` has roots outside the unit circle iff
/// the AR form with coefficients `−θ` is stationary.
fn ma_invertible(theta: &[f64]) -> bool {
    let negated: Vec<f64> = theta.iter().map(|t| -t).collect();
    ar_stationary(&negated)
}

/// Yule-Walker AR start values via the Levinson-Durbin recursion.
fn yule_walker(w: &[f64], p: usize) -> Vec<f64> {
    if p == 0 {
        return vec![];
    }
    let n = w.len();
    let mean = w.iter().sum::<f64>() / n as f64;
    let gamma: Vec<f64> = (0..=p)
        .map(|k| {
            (k..n).map(|t| (w[t] - mean) * (w[t - k] - mean)).sum::<f64>() / n as f64
        })
        .collect();
    if gamma[0] <= 0.0 {
        return vec![0.0; p];
    }
    let mut phi = vec![0.0; p];
    let mut prev = vec![0.0; p];
    let mut var = gamma[0];
    for k in 0..p {
        let mut acc = gamma[k + 1];
        for j in 0..k {
            acc -= prev[j] * gamma[k - j];
        }
        let reflect = acc / var;
        phi[..k].copy_from_slice(&prev[..k]);
        for j in 0..k {
            phi[j] = prev[j] - reflect * prev[k - 1 - j];
        }
        phi[k] = reflect;
        var *= 1.0 - reflect * reflect;
        if var <= 0.0 {
            break;
        }
        prev[..=k].copy_from_slice(&phi[..=k]);
    }
    if phi.iter().any(|v| !v.is_finite()) {
        return vec![0.0; p];
    }
    phi
}

/// Fit ARIMA(p, d, q) on a series. The model differences internally;
/// forecasts come back on the original scale of `series`.
pub fn fit_arima(
    series: &TimeSeries,
    p: usize,
    d: usize,
    q: usize,
    constant: bool,
) -> Result<ArimaState> {
    let values = series.values();
    let n = values.len();
    let min_len = 10 + p + q + d;
    if n < min_len {
        return Err(Error::degenerate(format!(
            "ARIMA({p},{d},{q}) needs at least {min_len} observations, got {n}"
        )));
    }

    let mut w = values.to_vec();
    for _ in 0..d {
        w = w.windows(2).map(|x| x[1] - x[0]).collect();
    }
    let m = w.len();
    if m <= p + q + 2 {
        return Err(Error::degenerate("too few observations after differencing"));
    }

    let n_params = p + q + usize::from(constant);
    let (ar, ma, intercept, converged) = if n_params == 0 {
        (vec![], vec![], 0.0, true)
    } else {
        // Start from Yule-Walker AR values, zero MA, and a matched constant.
        let phi0 = yule_walker(&w, p);
        let mean = w.iter().sum::<f64>() / m as f64;
        let mut x0: Vec<f64> = phi0.clone();
        x0.extend(std::iter::repeat(0.0).take(q));
        if constant {
            x0.push(mean * (1.0 - phi0.iter().sum::<f64>()));
        }
        // Constraining the search to the stationary and invertible region
        // keeps CSS honest: outside it the residual recursion can compress
        // the in-sample SSE without any predictive meaning.
        let objective = |params: &[f64]| -> f64 {
            let ar = &params[..p];
            let ma = &params[p..p + q];
            if !ar_stationary(ar) || !ma_invertible(ma) {
                return f64::INFINITY;
            }
            let c = if constant { params[p + q] } else { 0.0 };
            let e = css_residuals(&w, p, ar, ma, c);
            css_sse(&e, p)
        };
        let res = nelder_mead(&objective, &x0, 1e-10, 4000)?;
        let ar = res.x[..p].to_vec();
        let ma = res.x[p..p + q].to_vec();
        let c = if constant { res.x[p + q] } else { 0.0 };
        (ar, ma, c, res.converged)
    };

    let e = css_residuals(&w, p, &ar, &ma, intercept);
    let sse = css_sse(&e, p);
    let w_tail = w[m.saturating_sub(p.max(1))..].to_vec();
    let e_tail = e[m.saturating_sub(q.max(1))..].to_vec();
    let level_tail = values[n - (d + 1)..].to_vec();

    Ok(ArimaState {
        p,
        d,
        q,
        constant,
        ar,
        ma,
        intercept,
        w_tail,
        e_tail,
        level_tail,
        sse,
        n_eff: m - p,
        converged,
    })
}

/// Recursive forecast: future shocks are zero, forecasted differenced
/// values feed back into the AR part, and the internal differencing is
/// inverted from the stored level tail.
pub fn forecast_arima(state: &ArimaState, horizon: usize) -> Vec<f64> {
    let mut w_ext = state.w_tail.clone();
    let mut e_ext = state.e_tail.clone();
    let mut diffs = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let mut pred = state.intercept;
        for (i, &phi) in state.ar.iter().enumerate() {
            let idx = w_ext.len() as isize - 1 - i as isize;
            if idx >= 0 {
                pred += phi * w_ext[idx as usize];
            }
        }
        for (j, &theta) in state.ma.iter().enumerate() {
            let idx = e_ext.len() as isize - 1 - j as isize;
            if idx >= 0 {
                pred += theta * e_ext[idx as usize];
            }
        }
        w_ext.push(pred);
        e_ext.push(0.0);
        diffs.push(pred);
    }
    if state.d == 0 {
        return diffs;
    }
    crate::series::extend_levels(&state.level_tail, state.d, &diffs)
        .expect("level tail length is d + 1 by construction")
}

/// Information criterion for automatic order selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum InfoCriterion {
    #[default]
    Aic,
    Bic,
}

impl InfoCriterion {
    fn penalty(self, k: usize, n: usize) -> f64 {
        match self {
            InfoCriterion::Aic => 2.0 * k as f64,
            InfoCriterion::Bic => (n as f64).ln() * k as f64,
        }
    }
}

/// Score a fitted model on the common sample `t ≥ from` so candidates with
/// different AR orders compare on identical observations.
fn criterion_on_common_sample(
    state: &ArimaState,
    w: &[f64],
    from: usize,
    criterion: InfoCriterion,
) -> f64 {
    let e = css_residuals(w, state.p, &state.ar, &state.ma, state.intercept);
    let sse = css_sse(&e, from);
    let n = w.len() - from;
    let k = state.p + state.q + usize::from(state.constant) + 1;
    n as f64 * (sse / n as f64).max(1e-300).ln() + criterion.penalty(k, n)
}

/// Outcome of automatic order selection.
#[derive(Debug, Clone)]
pub struct AutoArimaResult {
    pub state: ArimaState,
    /// Criterion value of every evaluated grid point `(p, q, value)`.
    pub grid: Vec<(usize, usize, f64)>,
    pub warnings: Vec<String>,
}

/// Automatic ARIMA: `d` from the combined ADF+KPSS rule (capped at
/// `d_max`), then `(p, q)` by minimum information criterion over the grid,
/// ties broken by fewer parameters and then lower `q`.
pub fn auto_arima(
    series: &TimeSeries,
    p_max: usize,
    q_max: usize,
    d_max: usize,
    criterion: InfoCriterion,
) -> Result<AutoArimaResult> {
    let n = series.len();
    if n < 15 {
        return Err(Error::degenerate("auto ARIMA needs at least 15 observations"));
    }

    let mut warnings = Vec::new();

    // Differencing order from the stationarity rule; test failures stop
    // the search at the current order.
    let mut d = 0;
    let mut current = series.clone();
    while d < d_max {
        match is_stationary(&current) {
            Ok(true) => break,
            Ok(false) => {
                let (next, _) = crate::series::difference(&current, 1)?;
                current = next;
                d += 1;
            }
            Err(_) => break,
        }
    }

    // Degenerate variance after differencing: fall back to a naive model
    // expressed as ARIMA(0, 1, 0) without constant, which forecasts flat
    // at the last level.
    let w = current.values();
    let mean = w.iter().sum::<f64>() / w.len() as f64;
    if w.iter().all(|v| (v - mean).abs() < 1e-12) {
        warnings.push("degenerate variance; fell back to naive".to_string());
        let state = fit_arima(series, 0, d.max(1), 0, false)?;
        return Ok(AutoArimaResult { state, grid: vec![(0, 0, f64::NAN)], warnings });
    }

    let mut grid = Vec::new();
    let mut best: Option<(f64, usize, usize, ArimaState)> = None;
    for p in 0..=p_max {
        for q in 0..=q_max {
            match fit_arima(series, p, d, q, true) {
                Ok(state) => {
                    let value = criterion_on_common_sample(&state, w, p_max, criterion);
                    grid.push((p, q, value));
                    let better = match &best {
                        None => true,
                        Some((bv, bp, bq, _)) => {
                            value < bv - 1e-9
                                || ((value - bv).abs() <= 1e-9
                                    && (p + q < bp + bq || (p + q == bp + bq && q < *bq)))
                        }
                    };
                    if better {
                        best = Some((value, p, q, state));
                    }
                }
                Err(e) => {
                    warnings.push(format!("ARIMA({p},{d},{q}) failed: {e}"));
                }
            }
        }
    }

    match best {
        Some((_, _, _, state)) => Ok(AutoArimaResult { state, grid, warnings }),
        None => {
            warnings.push("all grid fits failed; fell back to naive".to_string());
            let state = fit_arima(series, 0, 0, 0, false)?;
            Ok(AutoArimaResult { state, grid, warnings })
        }
    }
}
