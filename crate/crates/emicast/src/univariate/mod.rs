//! The univariate baseline zoo behind one fit/forecast contract.
//!
//! All ten kinds operate on a single series (in this crate's pipeline, the
//! differenced target) and forecast recursively from their fitted state.

pub mod arima;
pub mod fourier;
pub mod smoothing;

pub use arima::{auto_arima, fit_arima, forecast_arima, ArimaState, InfoCriterion};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Specification of one univariate forecaster. `None` smoothing weights
/// are chosen by in-sample SSE grid search with local refinement.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind")]
pub enum UnivariateSpec {
    Naive,
    Drift,
    Ses {
        alpha: Option<f64>,
    },
    HoltLinear {
        alpha: Option<f64>,
        beta: Option<f64>,
    },
    /// Holt-Winters on annual data: additive trend, seasonal weight forced
    /// to zero because there is no sub-year season. Kept as a separate kind
    /// for report parity.
    HoltWinters {
        alpha: Option<f64>,
        beta: Option<f64>,
    },
    Theta {
        alpha: Option<f64>,
    },
    Fft {
        top_k: usize,
    },
    Arima {
        p: usize,
        d: usize,
        q: usize,
        constant: bool,
    },
    /// Seasonal ARIMA with annual period `m = 1`, which collapses the
    /// seasonal polynomial onto the regular one.
    Sarima {
        p: usize,
        d: usize,
        q: usize,
        sp: usize,
        sd: usize,
        sq: usize,
        period: usize,
    },
    AutoArima {
        p_max: usize,
        q_max: usize,
        d_max: usize,
        criterion: InfoCriterion,
    },
}

impl UnivariateSpec {
    /// Short display name used in report tables.
    pub fn display_name(&self) -> String {
        match self {
            UnivariateSpec::Naive => "Naive".into(),
            UnivariateSpec::Drift => "Drift".into(),
            UnivariateSpec::Ses { .. } => "SES".into(),
            UnivariateSpec::HoltLinear { .. } => "HoltLinear".into(),
            UnivariateSpec::HoltWinters { .. } => "HoltWinters".into(),
            UnivariateSpec::Theta { .. } => "Theta".into(),
            UnivariateSpec::Fft { .. } => "FFT".into(),
            UnivariateSpec::Arima { p, d, q, .. } => format!("ARIMA({p},{d},{q})"),
            UnivariateSpec::Sarima { p, d, q, sp, sd, sq, period } => {
                format!("SARIMA({p},{d},{q})({sp},{sd},{sq})[{period}]")
            }
            UnivariateSpec::AutoArima { .. } => "AutoARIMA".into(),
        }
    }
}

/// Fitted state per kind; everything a forecast needs is stored here, so a
/// serialized model reloads to bit-identical forecasts.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "state")]
pub enum FittedState {
    Naive(smoothing::NaiveState),
    Drift(smoothing::DriftState),
    Ses(smoothing::SesState),
    Holt(smoothing::HoltState),
    Theta(smoothing::ThetaState),
    Fft(fourier::FftState),
    Arima(ArimaState),
}

/// A fitted univariate forecaster with provenance.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FittedUnivariate {
    pub spec: UnivariateSpec,
    pub state: FittedState,
    pub seed: u64,
    /// One-step in-sample residual SSE where the model defines it.
    pub sse: Option<f64>,
    pub warnings: Vec<String>,
}

/// Fit a univariate spec on a series. Deterministic given (spec, series,
/// seed); the seed is recorded for provenance even though no univariate
/// kind draws randomness.
pub fn fit(spec: &UnivariateSpec, series: &TimeSeries, seed: u64) -> Result<FittedUnivariate> {
    let values = series.values();
    let (state, sse, warnings) = match spec {
        UnivariateSpec::Naive => {
            (FittedState::Naive(smoothing::fit_naive(values)?), None, vec![])
        }
        UnivariateSpec::Drift => {
            (FittedState::Drift(smoothing::fit_drift(values)?), None, vec![])
        }
        UnivariateSpec::Ses { alpha } => {
            let s = smoothing::fit_ses(values, *alpha)?;
            let sse = s.sse;
            (FittedState::Ses(s), Some(sse), vec![])
        }
        UnivariateSpec::HoltLinear { alpha, beta }
        | UnivariateSpec::HoltWinters { alpha, beta } => {
            let s = smoothing::fit_holt(values, *alpha, *beta)?;
            let sse = s.sse;
            (FittedState::Holt(s), Some(sse), vec![])
        }
        UnivariateSpec::Theta { alpha } => {
            let s = smoothing::fit_theta(values, *alpha)?;
            let sse = s.ses.sse;
            (FittedState::Theta(s), Some(sse), vec![])
        }
        UnivariateSpec::Fft { top_k } => {
            (FittedState::Fft(fourier::fit_fft(values, *top_k)?), None, vec![])
        }
        UnivariateSpec::Arima { p, d, q, constant } => {
            let s = fit_arima(series, *p, *d, *q, *constant)?;
            let warnings = if s.converged {
                vec![]
            } else {
                vec!["optimizer hit the iteration budget".to_string()]
            };
            let sse = s.sse;
            (FittedState::Arima(s), Some(sse), warnings)
        }
        UnivariateSpec::Sarima { p, d, q, sp, sd, sq, period } => {
            if *period != 1 {
                return Err(Error::invalid(
                    "annual data has no sub-year season; SARIMA supports period = 1 only",
                ));
            }
            // With period 1 the seasonal lags coincide with the regular
            // ones, so the orders simply add.
            let s = fit_arima(series, p + sp, d + sd, q + sq, true)?;
            let warnings = if s.converged {
                vec![]
            } else {
                vec!["optimizer hit the iteration budget".to_string()]
            };
            let sse = s.sse;
            (FittedState::Arima(s), Some(sse), warnings)
        }
        UnivariateSpec::AutoArima { p_max, q_max, d_max, criterion } => {
            let res = auto_arima(series, *p_max, *q_max, *d_max, *criterion)?;
            let sse = res.state.sse;
            (FittedState::Arima(res.state), Some(sse), res.warnings)
        }
    };
    Ok(FittedUnivariate { spec: spec.clone(), state, seed, sse, warnings })
}

impl FittedUnivariate {
    /// Forecast `horizon` steps ahead. Always returns exactly `horizon`
    /// finite values.
    pub fn forecast(&self, horizon: usize) -> Result<Vec<f64>> {
        if horizon < 1 {
            return Err(Error::invalid("forecast horizon must be at least 1"));
        }
        let out = match &self.state {
            FittedState::Naive(s) => smoothing::forecast_naive(s, horizon),
            FittedState::Drift(s) => smoothing::forecast_drift(s, horizon),
            FittedState::Ses(s) => smoothing::forecast_ses(s, horizon),
            FittedState::Holt(s) => smoothing::forecast_holt(s, horizon),
            FittedState::Theta(s) => smoothing::forecast_theta(s, horizon),
            FittedState::Fft(s) => fourier::forecast_fft(s, horizon),
            FittedState::Arima(s) => forecast_arima(s, horizon),
        };
        debug_assert_eq!(out.len(), horizon);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("forecast produced non-finite values"));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fitted model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("model JSON: {e}")))
    }
}

/// The default zoo of ten specs, in report order.
pub fn default_zoo() -> Vec<UnivariateSpec> {
    vec![
        UnivariateSpec::Arima { p: 1, d: 0, q: 1, constant: true },
        UnivariateSpec::Sarima { p: 1, d: 0, q: 1, sp: 1, sd: 0, sq: 0, period: 1 },
        UnivariateSpec::AutoArima { p_max: 3, q_max: 3, d_max: 2, criterion: InfoCriterion::Aic },
        UnivariateSpec::Ses { alpha: None },
        UnivariateSpec::HoltLinear { alpha: None, beta: None },
        UnivariateSpec::HoltWinters { alpha: None, beta: None },
        UnivariateSpec::Theta { alpha: None },
        UnivariateSpec::Fft { top_k: 3 },
        UnivariateSpec::Naive,
        UnivariateSpec::Drift,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn random_series(seed: u64, n: usize) -> TimeSeries {
        let mut rng = RngStream::new(seed).child("uni").rng();
        let vals: Vec<f64> = (0..n).map(|_| rng.next_normal() + 0.1).collect();
        TimeSeries::new("s", 1960, vals).unwrap()
    }

    #[test]
    fn forecast_length_contract_for_every_kind() {
        let series = random_series(12, 60);
        for spec in default_zoo() {
            let fitted = fit(&spec, &series, 42).unwrap();
            for h in [1usize, 5, 20] {
                let f = fitted.forecast(h).unwrap();
                assert_eq!(f.len(), h, "{}", spec.display_name());
                assert!(f.iter().all(|v| v.is_finite()));
            }
        }
    }

    #[test]
    fn degeneracy_chain_ses_naive_arima() {
        let series = random_series(5, 50);
        let naive = fit(&UnivariateSpec::Naive, &series, 0).unwrap();
        let ses1 = fit(&UnivariateSpec::Ses { alpha: Some(1.0) }, &series, 0).unwrap();
        let fa = naive.forecast(6).unwrap();
        let fb = ses1.forecast(6).unwrap();
        for (a, b) in fa.iter().zip(&fb) {
            assert!((a - b).abs() < 1e-9);
        }

        let holt0 = fit(
            &UnivariateSpec::HoltLinear { alpha: Some(0.4), beta: Some(0.0) },
            &series,
            0,
        )
        .unwrap();
        let ses04 = fit(&UnivariateSpec::Ses { alpha: Some(0.4) }, &series, 0).unwrap();
        for (a, b) in holt0.forecast(6).unwrap().iter().zip(&ses04.forecast(6).unwrap()) {
            assert!((a - b).abs() < 1e-9);
        }

        let arima010 = fit(
            &UnivariateSpec::Arima { p: 0, d: 1, q: 0, constant: false },
            &series,
            0,
        )
        .unwrap();
        for (a, b) in arima010.forecast(6).unwrap().iter().zip(&fa) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn horizon_zero_is_an_error() {
        let series = random_series(1, 30);
        let fitted = fit(&UnivariateSpec::Naive, &series, 0).unwrap();
        assert!(matches!(fitted.forecast(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn json_round_trip_reproduces_forecasts() {
        let series = random_series(9, 70);
        for spec in default_zoo() {
            let fitted = fit(&spec, &series, 7).unwrap();
            let json = fitted.to_json();
            let reloaded = FittedUnivariate::from_json(&json).unwrap();
            let fa = fitted.forecast(8).unwrap();
            let fb = reloaded.forecast(8).unwrap();
            assert_eq!(fa, fb, "{}", spec.display_name());
        }
    }

    #[test]
    fn sarima_rejects_multi_year_period() {
        let series = random_series(2, 40);
        let spec = UnivariateSpec::Sarima { p: 1, d: 0, q: 0, sp: 0, sd: 0, sq: 0, period: 12 };
        assert!(fit(&spec, &series, 0).is_err());
    }

    #[test]
    fn holt_winters_equals_holt_on_annual_data() {
        let series = random_series(3, 50);
        let hw = fit(&UnivariateSpec::HoltWinters { alpha: Some(0.5), beta: Some(0.2) }, &series, 0)
            .unwrap();
        let hl = fit(&UnivariateSpec::HoltLinear { alpha: Some(0.5), beta: Some(0.2) }, &series, 0)
            .unwrap();
        assert_eq!(hw.forecast(5).unwrap(), hl.forecast(5).unwrap());
    }
}
