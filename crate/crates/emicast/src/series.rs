//! Annual series containers, differencing with exact inversion, lagged
//! supervised-matrix construction, and the chronological train/test split.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// A named annual series: the value at index `i` belongs to year
/// `start_year + i`. Values are always finite and never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    name: String,
    start_year: i32,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, start_year: i32, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::degenerate("series must hold at least one value"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "series contains a non-finite value at year {}",
                start_year + i as i32
            )));
        }
        Ok(TimeSeries { name: name.into(), start_year, values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn last(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Value for a calendar year, if covered.
    pub fn at_year(&self, year: i32) -> Option<f64> {
        let idx = year.checked_sub(self.start_year)?;
        if idx < 0 {
            return None;
        }
        self.values.get(idx as usize).copied()
    }

    /// Same name and start year, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        TimeSeries::new(self.name.clone(), self.start_year, values)
    }

    /// Drop the first `n` observations, advancing the start year.
    pub fn trim_front(&self, n: usize) -> Result<Self> {
        if n >= self.values.len() {
            return Err(Error::degenerate(format!(
                "cannot trim {n} values from a series of length {}",
                self.values.len()
            )));
        }
        TimeSeries::new(self.name.clone(), self.start_year + n as i32, self.values[n..].to_vec())
    }
}

/// First-difference a value slice `order` times.
fn diff_values(values: &[f64], order: usize) -> Vec<f64> {
    let mut out = values.to_vec();
    for _ in 0..order {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    out
}

/// Difference a series `order` times. Returns the shortened series (its
/// start year advances by `order`) together with the retained heads — the
/// first `order` original values, exactly what [`invert_difference`] needs.
pub fn difference(series: &TimeSeries, order: usize) -> Result<(TimeSeries, Vec<f64>)> {
    if order == 0 {
        return Err(Error::invalid("difference order must be at least 1"));
    }
    if series.len() <= order {
        return Err(Error::degenerate(format!(
            "cannot difference a length-{} series {order} times",
            series.len()
        )));
    }
    let heads = series.values[..order].to_vec();
    let diffed = diff_values(&series.values, order);
    let out = TimeSeries::new(series.name.clone(), series.start_year + order as i32, diffed)?;
    Ok((out, heads))
}

/// Per-column differencing record: how many times the column was differenced
/// and the original values consumed in the process.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LedgerEntry {
    pub diff_order: usize,
    pub retained_heads: Vec<f64>,
}

/// Differencing ledger for a whole dataset, keyed by column name.
/// Holds everything needed to map differenced values back to level scale.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TransformLedger {
    entries: BTreeMap<String, LedgerEntry>,
}

impl TransformLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, column: &str, diff_order: usize, retained_heads: Vec<f64>) {
        self.entries.insert(
            column.to_string(),
            LedgerEntry { diff_order, retained_heads },
        );
    }

    pub fn entry(&self, column: &str) -> Option<&LedgerEntry> {
        self.entries.get(column)
    }

    pub fn columns(&self) -> impl Iterator<Item = (&String, &LedgerEntry)> {
        self.entries.iter()
    }

    /// The common front trim induced by mixed per-column orders.
    pub fn alignment_trim(&self) -> usize {
        self.entries.values().map(|e| e.diff_order).max().unwrap_or(0)
    }
}

/// Exact inverse of [`difference`]: rebuilds the original series from the
/// differenced one plus the retained heads.
pub fn invert_difference(diffed: &TimeSeries, entry: &LedgerEntry) -> Result<TimeSeries> {
    if entry.retained_heads.len() != entry.diff_order {
        return Err(Error::InversionMismatch(format!(
            "ledger holds {} heads for diff order {}",
            entry.retained_heads.len(),
            entry.diff_order
        )));
    }
    if entry.diff_order == 0 {
        return Ok(diffed.clone());
    }
    // Head of the l-times-differenced series is the l-th difference of the
    // retained heads; unwind one level at a time by cumulative summation.
    let mut cur = diffed.values.clone();
    for level in (0..entry.diff_order).rev() {
        let head = diff_values(&entry.retained_heads, level)[0];
        let mut rebuilt = Vec::with_capacity(cur.len() + 1);
        rebuilt.push(head);
        let mut acc = head;
        for &d in &cur {
            acc += d;
            rebuilt.push(acc);
        }
        cur = rebuilt;
    }
    TimeSeries::new(
        diffed.name.clone(),
        diffed.start_year - entry.diff_order as i32,
        cur,
    )
}

/// Extend a level-scale history by inverting a differenced continuation.
///
/// `future_diffs` are values of the `diff_order`-times differenced series
/// for the steps immediately after `history` ends; the result holds the
/// corresponding level-scale values, one per step.
pub fn extend_levels(history: &[f64], diff_order: usize, future_diffs: &[f64]) -> Result<Vec<f64>> {
    if history.len() <= diff_order {
        return Err(Error::degenerate(
            "history too short to seed the requested differencing order",
        ));
    }
    // Last value of each differencing level, seeded from the history tail.
    let mut last = Vec::with_capacity(diff_order + 1);
    for level in 0..=diff_order {
        let d = diff_values(history, level);
        last.push(*d.last().unwrap());
    }
    let mut out = Vec::with_capacity(future_diffs.len());
    for &step in future_diffs {
        last[diff_order] = step;
        for level in (0..diff_order).rev() {
            last[level] += last[level + 1];
        }
        out.push(last[0]);
    }
    Ok(out)
}

/// Aligned annual dataset: one target plus zero or more feature columns,
/// all sharing start year and length.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    target: TimeSeries,
    features: Vec<TimeSeries>,
}

impl Dataset {
    pub fn new(target: TimeSeries, features: Vec<TimeSeries>) -> Result<Self> {
        for f in &features {
            if f.start_year() != target.start_year() || f.len() != target.len() {
                return Err(Error::invalid(format!(
                    "feature '{}' is not aligned with the target ({}..{} vs {}..{})",
                    f.name(),
                    f.start_year(),
                    f.end_year(),
                    target.start_year(),
                    target.end_year()
                )));
            }
        }
        let mut names: Vec<&str> = features.iter().map(|f| f.name()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != features.len() {
            return Err(Error::invalid("feature names must be unique"));
        }
        Ok(Dataset { target, features })
    }

    pub fn target(&self) -> &TimeSeries {
        &self.target
    }

    pub fn features(&self) -> &[TimeSeries] {
        &self.features
    }

    pub fn feature(&self, name: &str) -> Option<&TimeSeries> {
        self.features.iter().find(|f| f.name() == name)
    }

    /// Target followed by features, in declared order.
    pub fn columns(&self) -> impl Iterator<Item = &TimeSeries> {
        std::iter::once(&self.target).chain(self.features.iter())
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn start_year(&self) -> i32 {
        self.target.start_year()
    }

    pub fn end_year(&self) -> i32 {
        self.target.end_year()
    }

    /// Chronological split keeping the final `test_len` rows out.
    /// Train ends exactly where test begins; nothing is shuffled.
    pub fn split(&self, test_len: usize) -> Result<(Dataset, Dataset)> {
        if test_len == 0 {
            return Err(Error::invalid("test_len must be at least 1"));
        }
        if test_len >= self.len() {
            return Err(Error::degenerate(format!(
                "test_len {test_len} leaves no training rows out of {}",
                self.len()
            )));
        }
        let cut = self.len() - test_len;
        let take = |s: &TimeSeries, from: usize, to: usize, year: i32| {
            TimeSeries::new(s.name().to_string(), year, s.values()[from..to].to_vec())
        };
        let train_target = take(&self.target, 0, cut, self.start_year())?;
        let test_year = self.start_year() + cut as i32;
        let test_target = take(&self.target, cut, self.len(), test_year)?;
        let mut train_feats = Vec::with_capacity(self.features.len());
        let mut test_feats = Vec::with_capacity(self.features.len());
        for f in &self.features {
            train_feats.push(take(f, 0, cut, self.start_year())?);
            test_feats.push(take(f, cut, self.len(), test_year)?);
        }
        Ok((
            Dataset::new(train_target, train_feats)?,
            Dataset::new(test_target, test_feats)?,
        ))
    }
}

/// Supervised rows built from lagged columns: each row pairs the target
/// value of one year with the `lags` previous values of every column.
#[derive(Debug, Clone, PartialEq)]
pub struct SupervisedMatrix {
    /// Lag order used for every column.
    pub lags: usize,
    /// Feature rows; width `lags * (1 + feature count)`. Layout per row:
    /// lags 1..=L of the target, then lags 1..=L of each feature in order.
    pub rows: Vec<Vec<f64>>,
    /// Target value per row.
    pub targets: Vec<f64>,
    /// Calendar year of each row's target.
    pub row_years: Vec<i32>,
    /// Column labels, e.g. `CO2[t-1]`.
    pub column_names: Vec<String>,
}

impl SupervisedMatrix {
    pub fn width(&self) -> usize {
        self.column_names.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows whose target year is strictly before `year`.
    pub fn before_year(&self, year: i32) -> SupervisedMatrix {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.row_years[i] < year).collect();
        SupervisedMatrix {
            lags: self.lags,
            rows: keep.iter().map(|&i| self.rows[i].clone()).collect(),
            targets: keep.iter().map(|&i| self.targets[i]).collect(),
            row_years: keep.iter().map(|&i| self.row_years[i]).collect(),
            column_names: self.column_names.clone(),
        }
    }

    /// The row predicting `year`, if present.
    pub fn row_for_year(&self, year: i32) -> Option<(&[f64], f64)> {
        let i = self.row_years.iter().position(|&y| y == year)?;
        Some((&self.rows[i], self.targets[i]))
    }

    pub fn design_matrix(&self) -> Result<crate::numerics::Matrix> {
        crate::numerics::Matrix::from_rows(&self.rows)
    }
}

/// Build the lag-`lags` supervised matrix over all dataset columns.
/// Row `t` carries lags 1..=`lags` of the target followed by the same lags
/// of each feature; no row references values at or after its target year.
pub fn build_lag_matrix(dataset: &Dataset, lags: usize) -> Result<SupervisedMatrix> {
    if lags == 0 {
        return Err(Error::invalid("lag order must be at least 1"));
    }
    if dataset.len() <= lags {
        return Err(Error::degenerate(format!(
            "need more than {lags} aligned rows, have {}",
            dataset.len()
        )));
    }
    let n = dataset.len();
    let mut column_names = Vec::new();
    for col in dataset.columns() {
        for l in 1..=lags {
            column_names.push(format!("{}[t-{}]", col.name(), l));
        }
    }
    let mut rows = Vec::with_capacity(n - lags);
    let mut targets = Vec::with_capacity(n - lags);
    let mut row_years = Vec::with_capacity(n - lags);
    for t in lags..n {
        let mut row = Vec::with_capacity(column_names.len());
        for col in dataset.columns() {
            for l in 1..=lags {
                row.push(col.values()[t - l]);
            }
        }
        rows.push(row);
        targets.push(dataset.target().values()[t]);
        row_years.push(dataset.start_year() + t as i32);
    }
    Ok(SupervisedMatrix { lags, rows, targets, row_years, column_names })
}

/// Canonical ingestion header for annual emission datasets.
pub const CSV_HEADER: &str = "year,co2_per_capita,gas_twh,coal_twh,oil_twh";

/// Column names a freshly ingested [`Dataset`] carries.
pub const TARGET_NAME: &str = "CO2";
pub const FEATURE_NAMES: [&str; 3] = ["Gas", "Coal", "Oil"];

/// Parse the bundled CSV layout: `year,co2_per_capita,gas_twh,coal_twh,oil_twh`
/// with strictly increasing gap-free years and plain decimal numbers.
pub fn parse_csv(text: &str) -> Result<Dataset> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, message: "empty file".into() })?;
    if header.trim() != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header '{CSV_HEADER}', found '{}'", header.trim()),
        });
    }

    let mut years: Vec<i32> = Vec::new();
    let mut cols: [Vec<f64>; 4] = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    let field_names = ["co2_per_capita", "gas_twh", "coal_twh", "oil_twh"];

    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        let year: i32 = fields[0].trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid year '{}'", fields[0].trim()),
        })?;
        if let Some(&prev) = years.last() {
            if year != prev + 1 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("years must increase without gaps: {prev} then {year}"),
                });
            }
        }
        years.push(year);
        for (c, field) in fields[1..].iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid value '{}' in column {}", field.trim(), field_names[c]),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("non-finite value in column {}", field_names[c]),
                });
            }
            cols[c].push(v);
        }
    }

    if years.is_empty() {
        return Err(Error::Parse { line: 1, message: "no data rows".into() });
    }
    let start = years[0];
    let target = TimeSeries::new(TARGET_NAME, start, std::mem::take(&mut cols[0]))?;
    let features = vec![
        TimeSeries::new(FEATURE_NAMES[0], start, std::mem::take(&mut cols[1]))?,
        TimeSeries::new(FEATURE_NAMES[1], start, std::mem::take(&mut cols[2]))?,
        TimeSeries::new(FEATURE_NAMES[2], start, std::mem::take(&mut cols[3]))?,
    ];
    Dataset::new(target, features)
}

/// Read and parse a dataset CSV from disk.
pub fn load_csv(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_csv(&text)
}

/// Render a dataset back to the canonical CSV layout.
pub fn to_csv(dataset: &Dataset) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for i in 0..dataset.len() {
        let year = dataset.start_year() + i as i32;
        out.push_str(&format!(
            "{year},{},{},{},{}\n",
            fmt_value(dataset.target().values()[i]),
            fmt_value(dataset.features()[0].values()[i]),
            fmt_value(dataset.features()[1].values()[i]),
            fmt_value(dataset.features()[2].values()[i]),
        ));
    }
    out
}

fn fmt_value(v: f64) -> String {
    // Shortest representation that round-trips.
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') {
        s.push_str(".0");
    }
    s
}

impl fmt::Display for TimeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}..{}]", self.name, self.start_year, self.end_year())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: &[f64]) -> TimeSeries {
        TimeSeries::new("s", 2000, values.to_vec()).unwrap()
    }

    #[test]
    fn constant_series_differences_to_zero() {
        let (d, heads) = difference(&series(&[5.0, 5.0, 5.0, 5.0]), 1).unwrap();
        assert_eq!(d.values(), &[0.0, 0.0, 0.0]);
        assert_eq!(heads, vec![5.0]);
        assert_eq!(d.start_year(), 2001);
    }

    #[test]
    fn first_differences_by_definition() {
        let (d, _) = difference(&series(&[1.0, 3.0, 6.0, 10.0]), 1).unwrap();
        assert_eq!(d.values(), &[2.0, 3.0, 4.0]);
    }

    #[test]
    fn second_difference_by_hand() {
        // First differences: [2,3,4]; differencing again: [1,1].
        let (d, heads) = difference(&series(&[1.0, 3.0, 6.0, 10.0]), 2).unwrap();
        assert_eq!(d.values(), &[1.0, 1.0]);
        assert_eq!(heads, vec![1.0, 3.0]);
    }

    #[test]
    fn difference_rejects_short_series() {
        let err = difference(&series(&[1.0, 2.0]), 2).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }

    #[test]
    fn order_one_twice_equals_order_two() {
        let s = series(&[3.0, 1.0, 4.0, 1.0, 5.0, 9.0]);
        let (d1, _) = difference(&s, 1).unwrap();
        let (d11, _) = difference(&d1, 1).unwrap();
        let (d2, _) = difference(&s, 2).unwrap();
        assert_eq!(d11.values(), d2.values());
    }

    #[test]
    fn invert_first_difference_is_cumsum() {
        let d = TimeSeries::new("s", 2001, vec![2.0, 3.0, 4.0]).unwrap();
        let entry = LedgerEntry { diff_order: 1, retained_heads: vec![1.0] };
        let back = invert_difference(&d, &entry).unwrap();
        assert_eq!(back.values(), &[1.0, 3.0, 6.0, 10.0]);
        assert_eq!(back.start_year(), 2000);
    }

    #[test]
    fn invert_constant_reconstruction() {
        let d = TimeSeries::new("s", 2001, vec![0.0, 0.0, 0.0]).unwrap();
        let entry = LedgerEntry { diff_order: 1, retained_heads: vec![5.0] };
        let back = invert_difference(&d, &entry).unwrap();
        assert_eq!(back.values(), &[5.0, 5.0, 5.0, 5.0]);
    }

    #[test]
    fn invert_double_difference_by_hand() {
        let d = TimeSeries::new("s", 2002, vec![1.0, 1.0]).unwrap();
        let entry = LedgerEntry { diff_order: 2, retained_heads: vec![1.0, 3.0] };
        let back = invert_difference(&d, &entry).unwrap();
        assert_eq!(back.values(), &[1.0, 3.0, 6.0, 10.0]);
    }

    #[test]
    fn invert_rejects_mismatched_ledger() {
        let d = TimeSeries::new("s", 2002, vec![1.0, 1.0]).unwrap();
        let entry = LedgerEntry { diff_order: 2, retained_heads: vec![1.0] };
        assert!(matches!(
            invert_difference(&d, &entry),
            Err(Error::InversionMismatch(_))
        ));
    }

    #[test]
    fn extend_levels_first_order() {
        // History [1,3,6], diffs continue [4,5] -> levels [10, 15].
        let ext = extend_levels(&[1.0, 3.0, 6.0], 1, &[4.0, 5.0]).unwrap();
        assert_eq!(ext, vec![10.0, 15.0]);
    }

    #[test]
    fn extend_levels_second_order() {
        // y = t^2: second differences are constant 2.
        let hist: Vec<f64> = (0..5).map(|t| (t * t) as f64).collect();
        let ext = extend_levels(&hist, 2, &[2.0, 2.0]).unwrap();
        assert_eq!(ext, vec![25.0, 36.0]);
    }

    fn toy_dataset(n: usize) -> Dataset {
        let target = TimeSeries::new("CO2", 2000, (0..n).map(|i| i as f64 + 1.0).collect()).unwrap();
        let feat =
            TimeSeries::new("Gas", 2000, (0..n).map(|i| 10.0 * (i as f64 + 1.0)).collect()).unwrap();
        Dataset::new(target, vec![feat]).unwrap()
    }

    #[test]
    fn lag_matrix_direct_construction() {
        let target = TimeSeries::new("y", 2000, vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let ds = Dataset::new(target, vec![]).unwrap();
        let sm = build_lag_matrix(&ds, 3).unwrap();
        assert_eq!(sm.rows, vec![vec![3.0, 2.0, 1.0], vec![4.0, 3.0, 2.0]]);
        assert_eq!(sm.targets, vec![4.0, 5.0]);
        assert_eq!(sm.row_years, vec![2003, 2004]);
    }

    #[test]
    fn lag_matrix_shape_rule() {
        let sm = build_lag_matrix(&toy_dataset(5), 3).unwrap();
        assert_eq!(sm.len(), 2);
        assert_eq!(sm.width(), 6);
    }

    #[test]
    fn lag_matrix_matches_index_arithmetic_oracle() {
        // Brute-force cell check on a pseudo-random dataset.
        let mut rng = crate::numerics::RngStream::new(23).child("lagmx").rng();
        let n = 30;
        let tvals: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
        let f1: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
        let f2: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
        let ds = Dataset::new(
            TimeSeries::new("y", 1990, tvals.clone()).unwrap(),
            vec![
                TimeSeries::new("a", 1990, f1.clone()).unwrap(),
                TimeSeries::new("b", 1990, f2.clone()).unwrap(),
            ],
        )
        .unwrap();
        let lags = 3;
        let sm = build_lag_matrix(&ds, lags).unwrap();
        let all = [&tvals, &f1, &f2];
        for (r, t) in (lags..n).enumerate() {
            assert_eq!(sm.targets[r], tvals[t]);
            for (c, col) in all.iter().enumerate() {
                for l in 1..=lags {
                    let cell = sm.rows[r][c * lags + (l - 1)];
                    assert_eq!(cell, col[t - l], "row {r} col {c} lag {l}");
                }
            }
        }
    }

    #[test]
    fn lag_matrix_rejects_short_input() {
        assert!(matches!(
            build_lag_matrix(&toy_dataset(3), 3),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn split_years_are_contiguous() {
        let ds = toy_dataset(56);
        let (train, test) = ds.split(10).unwrap();
        assert_eq!(train.len(), 46);
        assert_eq!(test.len(), 10);
        assert_eq!(train.end_year() + 1, test.start_year());
    }

    #[test]
    fn split_concatenation_reproduces_input() {
        let ds = toy_dataset(12);
        let (train, test) = ds.split(5).unwrap();
        let mut rebuilt = train.target().values().to_vec();
        rebuilt.extend_from_slice(test.target().values());
        assert_eq!(rebuilt, ds.target().values());
    }

    #[test]
    fn split_tiny_and_degenerate() {
        let ds = toy_dataset(5);
        let (train, test) = ds.split(1).unwrap();
        assert_eq!(train.len(), 4);
        assert_eq!(test.len(), 1);
        assert!(matches!(ds.split(5), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn csv_round_trip() {
        let text = "year,co2_per_capita,gas_twh,coal_twh,oil_twh\n\
                    1990,5.5,10.0,20.0,30.0\n\
                    1991,5.7,11.0,21.0,31.0\n";
        let ds = parse_csv(text).unwrap();
        assert_eq!(ds.start_year(), 1990);
        assert_eq!(ds.target().values(), &[5.5, 5.7]);
        assert_eq!(ds.features()[2].values(), &[30.0, 31.0]);
        let rendered = to_csv(&ds);
        let reparsed = parse_csv(&rendered).unwrap();
        assert_eq!(reparsed, ds);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let text = "year,co2_per_capita,gas_twh,coal_twh,oil_twh\n\
                    1990,5.5,10.0,20.0,30.0\n\
                    1991,NA,11.0,21.0,31.0\n";
        match parse_csv(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("co2_per_capita"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_rejects_year_gaps() {
        let text = "year,co2_per_capita,gas_twh,coal_twh,oil_twh\n\
                    1990,5.5,10.0,20.0,30.0\n\
                    1992,5.7,11.0,21.0,31.0\n";
        assert!(matches!(parse_csv(text), Err(Error::Parse { line: 3, .. })));
    }
}
