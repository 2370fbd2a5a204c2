//! Spectral forecaster: OLS detrend plus extrapolation of the largest
//! discrete-Fourier components of the residual.

use crate::error::{Error, Result};

/// One retained sinusoid, parameterized so the forecast can re-evaluate it
/// at any future index.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectralComponent {
    /// Harmonic index k: the component completes k cycles over the
    /// training window.
    pub harmonic: usize,
    pub cosine: f64,
    pub sine: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FftState {
    pub intercept: f64,
    pub slope: f64,
    pub n: usize,
    pub components: Vec<SpectralComponent>,
}

/// Fit the spectral model: detrend by an OLS line, run a real DFT over the
/// residual, and keep the `top_k` harmonics with the largest amplitude.
pub fn fit_fft(values: &[f64], top_k: usize) -> Result<FftState> {
    let n = values.len();
    if n < 8 {
        return Err(Error::degenerate("spectral fit needs at least 8 observations"));
    }
    if top_k == 0 {
        return Err(Error::invalid("top_k must be at least 1"));
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
    let resid: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, &y)| y - intercept - slope * i as f64)
        .collect();

    // Direct real DFT; n stays far too small for an FFT to matter.
    let mut comps: Vec<(f64, SpectralComponent)> = Vec::new();
    for k in 1..=n / 2 {
        let mut c = 0.0;
        let mut s = 0.0;
        for (t, &r) in resid.iter().enumerate() {
            let arg = 2.0 * std::f64::consts::PI * k as f64 * t as f64 / n as f64;
            c += r * arg.cos();
            s += r * arg.sin();
        }
        // Nyquist bin (even n) carries half the weight of interior bins.
        let scale = if n % 2 == 0 && k == n / 2 { 1.0 / n as f64 } else { 2.0 / n as f64 };
        let comp = SpectralComponent { harmonic: k, cosine: scale * c, sine: scale * s };
        let amplitude = (comp.cosine * comp.cosine + comp.sine * comp.sine).sqrt();
        comps.push((amplitude, comp));
    }
    comps.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.harmonic.cmp(&b.1.harmonic)));
    let components: Vec<SpectralComponent> =
        comps.into_iter().take(top_k).map(|(_, c)| c).collect();

    Ok(FftState { intercept, slope, n, components })
}

pub fn forecast_fft(state: &FftState, horizon: usize) -> Vec<f64> {
    (0..horizon)
        .map(|h| {
            let t = (state.n + h) as f64;
            let mut v = state.intercept + state.slope * t;
            for c in &state.components {
                let arg = 2.0 * std::f64::consts::PI * c.harmonic as f64 * t / state.n as f64;
                v += c.cosine * arg.cos() + c.sine * arg.sin();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_a_planted_sinusoid() {
        // OLS detrending absorbs a sliver of any finite-window sinusoid
        // (the sine is not exactly orthogonal to a ramp), so amplitude and
        // continuation are checked to a few percent, not machine epsilon.
        let n = 48;
        let k = 4.0;
        let values: Vec<f64> = (0..n)
            .map(|t| {
                1.0 + 0.2 * t as f64
                    + 3.0 * (2.0 * std::f64::consts::PI * k * t as f64 / n as f64).sin()
            })
            .collect();
        let state = fit_fft(&values, 1).unwrap();
        assert_eq!(state.components[0].harmonic, 4);
        let amp = (state.components[0].cosine.powi(2) + state.components[0].sine.powi(2)).sqrt();
        assert!((amp - 3.0).abs() < 0.2, "amplitude {amp}");

        // Extrapolation must track the oscillation far better than the
        // trend line alone over the next period.
        let truth: Vec<f64> = (n..2 * n)
            .map(|t| {
                1.0 + 0.2 * t as f64
                    + 3.0 * (2.0 * std::f64::consts::PI * k * t as f64 / n as f64).sin()
            })
            .collect();
        let f = forecast_fft(&state, n);
        let trend_only = FftState { components: vec![], ..state.clone() };
        let f_trend = forecast_fft(&trend_only, n);
        let rmse = |pred: &[f64]| {
            (pred.iter().zip(&truth).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
                / n as f64)
                .sqrt()
        };
        assert!(rmse(&f) < 0.7 * rmse(&f_trend), "{} vs {}", rmse(&f), rmse(&f_trend));
    }

    #[test]
    fn pure_trend_forecasts_the_line() {
        let values: Vec<f64> = (0..40).map(|t| 5.0 - 0.3 * t as f64).collect();
        let state = fit_fft(&values, 3).unwrap();
        let f = forecast_fft(&state, 5);
        for (h, v) in f.iter().enumerate() {
            let expected = 5.0 - 0.3 * (40 + h) as f64;
            assert!((v - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn too_short_is_degenerate() {
        assert!(fit_fft(&[1.0; 5], 3).is_err());
    }
}
