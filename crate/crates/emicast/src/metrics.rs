//! The six evaluation metrics and model ranking tables.
//!
//! All metrics are computed on level-scale values; percentage errors use
//! the observed level as (half of) the denominator, so a MAPE of 1.4 means
//! 1.4 percent.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// MAE, MSE, RMSE, MAPE, SMAPE, and maximum absolute error for one model
/// on one evaluation window.
///
/// `mape_pct` is `None` when any observed value is exactly zero (the ratio
/// is undefined there). SMAPE terms with `|y| + |ŷ| = 0` contribute zero.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetricBundle {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub mape_pct: Option<f64>,
    pub smape_pct: f64,
    pub max_error: f64,
}

/// Compute the full metric bundle for a prediction vector.
pub fn evaluate(y_true: &[f64], y_pred: &[f64]) -> Result<MetricBundle> {
    if y_true.is_empty() {
        return Err(Error::degenerate("empty evaluation window"));
    }
    if y_true.len() != y_pred.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} observed vs {} predicted",
            y_true.len(),
            y_pred.len()
        )));
    }
    let n = y_true.len() as f64;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    let mut max_err: f64 = 0.0;
    let mut mape_sum = 0.0;
    let mut mape_defined = true;
    let mut smape_sum = 0.0;
    for (&y, &p) in y_true.iter().zip(y_pred) {
        let e = (y - p).abs();
        abs_sum += e;
        sq_sum += e * e;
        max_err = max_err.max(e);
        if y == 0.0 {
            mape_defined = false;
        } else {
            mape_sum += e / y.abs();
        }
        let denom = (y.abs() + p.abs()) / 2.0;
        if denom > 0.0 {
            smape_sum += e / denom;
        }
    }
    let mse = sq_sum / n;
    Ok(MetricBundle {
        mae: abs_sum / n,
        mse,
        rmse: mse.sqrt(),
        mape_pct: if mape_defined { Some(100.0 * mape_sum / n) } else { None },
        smape_pct: 100.0 * smape_sum / n,
        max_error: max_err,
    })
}

/// One row of a ranked evaluation table.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RankedRow {
    pub model: String,
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub mape_pct: Option<f64>,
    pub smape_pct: f64,
    pub max_error: f64,
    pub rank: usize,
}

/// Metric used to order ranked tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankKey {
    #[default]
    Smape,
    Mae,
    Rmse,
}

impl RankKey {
    fn value(self, b: &MetricBundle) -> f64 {
        match self {
            RankKey::Smape => b.smape_pct,
            RankKey::Mae => b.mae,
            RankKey::Rmse => b.rmse,
        }
    }
}

/// Order models ascending by the rank key, breaking ties by MAE and then
/// model name so the output never depends on insertion order.
pub fn rank_models(bundles: &BTreeMap<String, MetricBundle>, key: RankKey) -> Result<Vec<RankedRow>> {
    if bundles.is_empty() {
        return Err(Error::degenerate("no models to rank"));
    }
    let mut entries: Vec<(&String, &MetricBundle)> = bundles.iter().collect();
    entries.sort_by(|(na, a), (nb, b)| {
        key.value(a)
            .partial_cmp(&key.value(b))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.mae.partial_cmp(&b.mae).unwrap_or(std::cmp::Ordering::Equal))
            .then(na.cmp(nb))
    });
    Ok(entries
        .into_iter()
        .enumerate()
        .map(|(i, (name, b))| RankedRow {
            model: name.clone(),
            mae: b.mae,
            mse: b.mse,
            rmse: b.rmse,
            mape_pct: b.mape_pct,
            smape_pct: b.smape_pct,
            max_error: b.max_error,
            rank: i + 1,
        })
        .collect())
}

/// Render ranked rows as a CSV table mirroring the evaluation report layout.
pub fn table_to_csv(rows: &[RankedRow]) -> String {
    let mut out = String::from("model,mae,mse,rmse,mape_pct,smape_pct,max_error,rank\n");
    for r in rows {
        let mape = r.mape_pct.map_or("NA".to_string(), |v| format!("{v:.6}"));
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{},{:.6},{:.6},{}\n",
            r.model, r.mae, r.mse, r.rmse, mape, r.smape_pct, r.max_error, r.rank
        ));
    }
    out
}
