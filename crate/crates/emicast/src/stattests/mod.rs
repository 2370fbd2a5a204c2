//! Stationarity tests, multicollinearity screening, and the iterative
//! stationarization loop that decides differencing orders.

pub mod adf;
pub mod critical_values;
pub mod kpss;
pub mod vif;

pub use adf::{adf_test, adf_test_config, AdfRegression};
pub use critical_values::{calibration_report, simulate_critical_values, CalibrationRow, TestKind};
pub use kpss::{kpss_test, kpss_test_config};
pub use vif::vif;

use crate::error::{Error, Result};
use crate::series::{difference, Dataset, TimeSeries, TransformLedger};

/// Outcome of one hypothesis test run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub cv01: f64,
    pub cv05: f64,
    pub cv10: f64,
    /// Selected lag order (ADF) or Bartlett bandwidth (KPSS).
    pub lags_or_bandwidth: usize,
    pub rejected_at_5pct: bool,
}

/// One row of a serialized stationarity report.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TestRecord {
    pub column: String,
    /// "ADF" or "KPSS".
    pub test: String,
    /// Differencing order of the series the test ran on.
    pub diff_order: usize,
    pub statistic: f64,
    pub cv01: f64,
    pub cv05: f64,
    pub cv10: f64,
    pub lags: usize,
    /// "reject" or "fail_to_reject" at the 5% level.
    pub decision: String,
}

/// Per-column conclusion of the stationarization loop.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ColumnDecision {
    pub column: String,
    /// Smallest order (capped at 2) at which the combined rule passed.
    pub decided_diff_order: usize,
    /// True when the column still failed the rule at the cap.
    pub non_stationary_at_cap: bool,
}

/// Every test run plus the decided differencing order per column.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StationarityReport {
    pub records: Vec<TestRecord>,
    pub decisions: Vec<ColumnDecision>,
}

impl StationarityReport {
    pub fn decided_order(&self, column: &str) -> Option<usize> {
        self.decisions
            .iter()
            .find(|d| d.column == column)
            .map(|d| d.decided_diff_order)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn record_from(column: &str, test: &str, diff_order: usize, r: &TestResult) -> TestRecord {
    TestRecord {
        column: column.to_string(),
        test: test.to_string(),
        diff_order,
        statistic: r.statistic,
        cv01: r.cv01,
        cv05: r.cv05,
        cv10: r.cv10,
        lags: r.lags_or_bandwidth,
        decision: if r.rejected_at_5pct { "reject" } else { "fail_to_reject" }.to_string(),
    }
}

/// Combined decision rule: a series counts as stationary when ADF rejects
/// its unit-root null at 5% AND KPSS fails to reject its stationarity null.
pub fn is_stationary(series: &TimeSeries) -> Result<bool> {
    let adf = adf_test(series, None)?;
    let kpss = kpss_test(series, None)?;
    Ok(adf.rejected_at_5pct && !kpss.rejected_at_5pct)
}

/// Maximum differencing order the loop will apply.
pub const MAX_DIFF_ORDER: usize = 2;

/// Difference every column the minimum number of times (capped at 2) until
/// the combined ADF+KPSS rule passes, then trim all columns to a common
/// start so the dataset stays rectangular.
///
/// A column that is still non-stationary at the cap is flagged in the
/// report rather than raised as an error.
pub fn stationarize(dataset: &Dataset) -> Result<(Dataset, TransformLedger, StationarityReport)> {
    let mut ledger = TransformLedger::new();
    let mut report = StationarityReport::default();
    let mut decided: Vec<(String, usize, Vec<f64>)> = Vec::new();

    for column in dataset.columns() {
        let mut current = column.clone();
        let mut order = 0;
        let mut heads: Vec<f64> = Vec::new();
        let (final_order, at_cap) = loop {
            let outcome = adf_test(&current, None)
                .and_then(|adf| kpss_test(&current, None).map(|kpss| (adf, kpss)));
            let (adf, kpss) = match outcome {
                Ok(pair) => pair,
                // A column that became (near-)constant under differencing is
                // untestable but perfectly predictable; stop differencing it.
                Err(Error::DegenerateInput(_)) | Err(Error::RankDeficient(_)) if order > 0 => {
                    break (order, false);
                }
                Err(e) => return Err(e),
            };
            report.records.push(record_from(column.name(), "ADF", order, &adf));
            report.records.push(record_from(column.name(), "KPSS", order, &kpss));
            let stationary = adf.rejected_at_5pct && !kpss.rejected_at_5pct;
            if stationary {
                break (order, false);
            }
            if order == MAX_DIFF_ORDER {
                break (order, true);
            }
            let (next, _) = difference(&current, 1)?;
            heads.push(current.values()[0]);
            current = next;
            order += 1;
        };
        report.decisions.push(ColumnDecision {
            column: column.name().to_string(),
            decided_diff_order: final_order,
            non_stationary_at_cap: at_cap,
        });
        ledger.record(column.name(), final_order, heads);
        decided.push((column.name().to_string(), final_order, column.values().to_vec()));
    }

    // Rebuild the aligned dataset: difference each column by its decided
    // order, then drop leading rows so every column starts at
    // `start_year + max_order`.
    let max_order = ledger.alignment_trim();
    let start = dataset.start_year();
    let mut aligned: Vec<TimeSeries> = Vec::with_capacity(decided.len());
    for (name, order, values) in &decided {
        let mut v = values.clone();
        for _ in 0..*order {
            v = v.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let extra = max_order - order;
        let trimmed = v[extra..].to_vec();
        aligned.push(TimeSeries::new(name.clone(), start + max_order as i32, trimmed)?);
    }

    let mut iter = aligned.into_iter();
    let target = iter.next().ok_or_else(|| Error::degenerate("empty dataset"))?;
    let features: Vec<TimeSeries> = iter.collect();
    let out = Dataset::new(target, features)?;
    Ok((out, ledger, report))
}
