//! Variance inflation factors for multicollinearity screening.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numerics::{ols_solve, Matrix};
use crate::series::TimeSeries;

/// VIF per feature: `1/(1 − R²_j)` from regressing feature j on all other
/// features with an intercept. Perfect collinearity is reported as the
/// `+∞` sentinel rather than an error.
pub fn vif(features: &[TimeSeries]) -> Result<BTreeMap<String, f64>> {
    if features.len() < 2 {
        return Err(Error::degenerate("VIF needs at least two features"));
    }
    let n = features[0].len();
    if features.iter().any(|f| f.len() != n) {
        return Err(Error::invalid("VIF features must share length"));
    }
    if n < features.len() + 2 {
        return Err(Error::degenerate(format!(
            "VIF needs at least {} rows for {} features, got {n}",
            features.len() + 2,
            features.len()
        )));
    }
    for f in features {
        let vals = f.values();
        let mean = vals.iter().sum::<f64>() / n as f64;
        if vals.iter().all(|v| (v - mean).abs() < 1e-300) {
            return Err(Error::degenerate(format!("feature '{}' has zero variance", f.name())));
        }
    }

    let mut out = BTreeMap::new();
    for (j, target) in features.iter().enumerate() {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                features
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, f)| f.values()[i])
                    .collect()
            })
            .collect();
        let x = Matrix::from_rows(&rows)?;
        let y = target.values();
        let r2 = match ols_solve(&x, y, true) {
            Ok(fit) => {
                let mean = y.iter().sum::<f64>() / n as f64;
                let sst: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
                1.0 - fit.sse() / sst
            }
            // Collinearity among the regressors themselves: the fit of j on
            // them is still perfect in the cases that matter (duplicates).
            Err(Error::RankDeficient(_)) => 1.0,
            Err(e) => return Err(e),
        };
        let value = if r2 >= 1.0 - 1e-12 { f64::INFINITY } else { 1.0 / (1.0 - r2) };
        out.insert(target.name().to_string(), value);
    }
    Ok(out)
}
