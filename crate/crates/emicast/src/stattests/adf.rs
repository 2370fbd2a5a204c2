//! Augmented Dickey-Fuller unit-root test.
//!
//! Fits `Δy_t = α + [βt] + γ·y_{t−1} + Σ δ_i·Δy_{t−i} + ε_t` and reports
//! the t-ratio of `γ̂`. Large negative values reject the unit-root null.

use crate::error::{Error, Result};
use crate::numerics::{ols_solve, Matrix};
use crate::series::TimeSeries;
use crate::stattests::critical_values::{lookup, TestKind};
use crate::stattests::TestResult;

/// Deterministic terms in the test regression. The constant-only form is
/// the crate default; the trend form is available for trending levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdfRegression {
    #[default]
    Constant,
    ConstantTrend,
}

/// Schwert's rule for the maximum lag order: `floor(12·(T/100)^0.25)`.
pub fn schwert_max_lag(t_len: usize) -> usize {
    (12.0 * (t_len as f64 / 100.0).powf(0.25)).floor() as usize
}

/// ADF test with automatic lag selection: start from the Schwert bound and
/// drop the final lagged difference while its t-statistic stays below
/// 1.645 in absolute value.
pub fn adf_test(series: &TimeSeries, max_lag: Option<usize>) -> Result<TestResult> {
    adf_test_config(series, max_lag, AdfRegression::Constant)
}

pub fn adf_test_config(
    series: &TimeSeries,
    max_lag: Option<usize>,
    regression: AdfRegression,
) -> Result<TestResult> {
    let y = series.values();
    let n = y.len();
    let trend = regression == AdfRegression::ConstantTrend;

    // Cap the lag order so at least 15 regression rows survive.
    let mut p = max_lag.unwrap_or_else(|| schwert_max_lag(n));
    while p > 0 && n.saturating_sub(1 + p) < 15 + p + 2 + usize::from(trend) {
        p -= 1;
    }
    if n.saturating_sub(1 + p) < 15 {
        return Err(Error::degenerate(format!(
            "ADF needs at least 15 usable observations, series of length {n} leaves {}",
            n.saturating_sub(1 + p)
        )));
    }

    // Trim insignificant final lags.
    let (statistic, used_lags, t_eff) = loop {
        let fit = fit_adf(y, p, trend)?;
        if p == 0 {
            break (fit.gamma_t, 0, fit.rows);
        }
        let last_lag_t = fit.last_delta_t.expect("p > 0 implies a final lag");
        if last_lag_t.abs() >= 1.645 {
            break (fit.gamma_t, p, fit.rows);
        }
        p -= 1;
    };

    let kind = if trend { TestKind::AdfConstantTrend } else { TestKind::AdfConstant };
    let cv = lookup(kind, t_eff);
    Ok(TestResult {
        statistic,
        cv01: cv.cv01,
        cv05: cv.cv05,
        cv10: cv.cv10,
        lags_or_bandwidth: used_lags,
        rejected_at_5pct: statistic < cv.cv05,
    })
}

struct AdfFit {
    gamma_t: f64,
    /// t-statistic of the coefficient on the most distant lagged difference.
    last_delta_t: Option<f64>,
    rows: usize,
}

/// The raw Dickey-Fuller t-statistic at a fixed lag order, used both by the
/// public test and by the Monte-Carlo critical-value simulation.
pub(crate) fn adf_statistic(y: &[f64], p: usize, trend: bool) -> Result<f64> {
    Ok(fit_adf(y, p, trend)?.gamma_t)
}

fn fit_adf(y: &[f64], p: usize, trend: bool) -> Result<AdfFit> {
    let n = y.len();
    if n < p + 2 {
        return Err(Error::degenerate("series too short for ADF regression"));
    }
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();

    // Rows t = p+1 .. n-1 (indices into y).
    let rows = n - 1 - p;
    let k = 1 + usize::from(trend) + p; // level lag + optional trend + diffs
    if rows < k + 2 {
        return Err(Error::degenerate("too few rows for ADF design"));
    }
    let mut design = Vec::with_capacity(rows);
    let mut target = Vec::with_capacity(rows);
    for t in (p + 1)..n {
        let mut row = Vec::with_capacity(k);
        row.push(y[t - 1]);
        if trend {
            row.push(t as f64);
        }
        for i in 1..=p {
            row.push(dy[t - 1 - i]);
        }
        design.push(row);
        target.push(dy[t - 1]);
    }
    let x = Matrix::from_rows(&design)?;
    let fit = ols_solve(&x, &target, true).map_err(|e| match e {
        Error::RankDeficient(m) => Error::RankDeficient(format!("ADF regression singular: {m}")),
        other => other,
    })?;

    let gamma_t = fit.coefficients[0] / fit.std_errors[0];
    let gamma_t = if gamma_t.is_finite() {
        gamma_t
    } else if !fit.jittered && fit.std_errors[0] == 0.0 && fit.coefficients[0].abs() < 1e-8 {
        // Perfectly deterministic series (e.g. an exact ramp): the design is
        // full rank but the fit is exact, and the point estimate sits on the
        // unit-root null, so nothing is rejected. A jittered (collinear)
        // design stays an error instead.
        0.0
    } else {
        return Err(Error::RankDeficient("ADF t-ratio not finite".into()));
    };
    let last_delta_t = if p > 0 {
        let idx = k - 1;
        Some(fit.coefficients[idx] / fit.std_errors[idx])
    } else {
        None
    };
    Ok(AdfFit { gamma_t, last_delta_t, rows })
}
