//! KPSS stationarity test.
//!
//! The statistic is `T⁻² Σ S_t² / σ̂²` where `S_t` are partial sums of the
//! residuals from regressing the series on an intercept (level form) or an
//! intercept plus trend, and `σ̂²` is the Bartlett-kernel long-run variance.
//! Large values reject the stationarity null.

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::stattests::critical_values::{lookup, TestKind};
use crate::stattests::TestResult;

/// Bartlett bandwidth rule: `floor(4·(T/100)^0.25)`.
pub fn default_bandwidth(t_len: usize) -> usize {
    (4.0 * (t_len as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Level-form KPSS test with the default Bartlett bandwidth.
pub fn kpss_test(series: &TimeSeries, bandwidth: Option<usize>) -> Result<TestResult> {
    kpss_test_config(series, bandwidth, false)
}

pub fn kpss_test_config(
    series: &TimeSeries,
    bandwidth: Option<usize>,
    trend: bool,
) -> Result<TestResult> {
    let y = series.values();
    let n = y.len();
    if n < 15 {
        return Err(Error::degenerate(format!(
            "KPSS needs at least 15 observations, got {n}"
        )));
    }
    let bw = bandwidth.unwrap_or_else(|| default_bandwidth(n));
    let statistic = kpss_statistic(y, trend, bw)?;
    let kind = if trend { TestKind::KpssTrend } else { TestKind::KpssLevel };
    let cv = lookup(kind, n);
    Ok(TestResult {
        statistic,
        cv01: cv.cv01,
        cv05: cv.cv05,
        cv10: cv.cv10,
        lags_or_bandwidth: bw,
        rejected_at_5pct: statistic > cv.cv05,
    })
}

/// Raw KPSS statistic on a value slice, shared with the Monte-Carlo
/// critical-value simulation.
pub(crate) fn kpss_statistic(y: &[f64], trend: bool, bandwidth: usize) -> Result<f64> {
    let n = y.len();
    let residuals = if trend {
        detrend(y)
    } else {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| v - mean).collect()
    };

    // Long-run variance with Bartlett weights.
    let gamma = |lag: usize| -> f64 {
        residuals[lag..]
            .iter()
            .zip(&residuals[..n - lag])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n as f64
    };
    let mut lrv = gamma(0);
    for l in 1..=bandwidth.min(n - 1) {
        let w = 1.0 - l as f64 / (bandwidth as f64 + 1.0);
        lrv += 2.0 * w * gamma(l);
    }
    if lrv <= 0.0 || gamma(0) == 0.0 {
        return Err(Error::degenerate(
            "KPSS long-run variance is zero (constant or degenerate series)",
        ));
    }

    let mut cum = 0.0;
    let mut sum_sq = 0.0;
    for &e in &residuals {
        cum += e;
        sum_sq += cum * cum;
    }
    Ok(sum_sq / (n as f64 * n as f64 * lrv))
}

/// Residuals from an OLS fit of the series on an intercept and linear trend.
fn detrend(y: &[f64]) -> Vec<f64> {
    let n = y.len() as f64;
    let t_mean = (n - 1.0) / 2.0;
    let y_mean = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, &v) in y.iter().enumerate() {
        let dt = i as f64 - t_mean;
        sxy += dt * (v - y_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    y.iter()
        .enumerate()
        .map(|(i, &v)| v - intercept - slope * i as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn make_series(values: Vec<f64>) -> TimeSeries {
        TimeSeries::new("t", 1900, values).unwrap()
    }

    #[test]
    fn fails_to_reject_on_white_noise() {
        let mut rng = RngStream::new(3).child("kpss-wn").rng();
        let y: Vec<f64> = (0..500).map(|_| rng.next_normal()).collect();
        let res = kpss_test(&make_series(y), None).unwrap();
        assert!(!res.rejected_at_5pct, "stat {}", res.statistic);
    }

    #[test]
    fn rejects_on_random_walk() {
        let mut rng = RngStream::new(4).child("kpss-rw").rng();
        let mut acc = 0.0;
        let y: Vec<f64> = (0..500)
            .map(|_| {
                acc += rng.next_normal();
                acc
            })
            .collect();
        let res = kpss_test(&make_series(y), None).unwrap();
        assert!(res.rejected_at_5pct, "stat {}", res.statistic);
    }

    #[test]
    fn constant_series_errors() {
        let res = kpss_test(&make_series(vec![2.0; 50]), None);
        assert!(matches!(res, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn trend_form_tolerates_linear_ramp() {
        // A noisy ramp is trend-stationary: level form rejects, trend form not.
        let mut rng = RngStream::new(6).child("kpss-ramp").rng();
        let y: Vec<f64> = (0..200).map(|i| 0.5 * i as f64 + rng.next_normal()).collect();
        let level = kpss_test(&make_series(y.clone()), None).unwrap();
        let trend = kpss_test_config(&make_series(y), None, true).unwrap();
        assert!(level.rejected_at_5pct);
        assert!(!trend.rejected_at_5pct, "stat {}", trend.statistic);
    }

    #[test]
    fn bandwidth_rule_values() {
        assert_eq!(default_bandwidth(100), 4);
        assert_eq!(default_bandwidth(500), 5);
        assert_eq!(default_bandwidth(56), 3);
    }
}
