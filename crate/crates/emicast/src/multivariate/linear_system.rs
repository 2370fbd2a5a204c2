//! Linear multivariate forecasters: VAR, Bayesian-shrunk VAR, the
//! Engle-Granger error-correction model, and a one-factor dynamic factor
//! model.

use crate::error::{Error, Result};
use crate::numerics::{matrix::cholesky_solve, ols_solve, Matrix};
use crate::series::Dataset;

/// VAR(p): one OLS equation per column on lags 1..=p of every column.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VarModel {
    pub p: usize,
    pub column_names: Vec<String>,
    /// Per equation: intercept followed by coefficients on
    /// `col_0[t-1..t-p], col_1[t-1..t-p], ...`.
    pub equations: Vec<Vec<f64>>,
    pub jittered: bool,
}

/// Lagged design shared by VAR and BVAR: row `t` holds lags 1..=p of every
/// column, in column-major blocks.
fn var_design(dataset: &Dataset, p: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let n = dataset.len();
    if n <= p + 2 {
        return Err(Error::degenerate(format!(
            "VAR({p}) needs more than {} rows, have {n}",
            p + 2
        )));
    }
    let cols: Vec<&[f64]> = dataset.columns().map(|c| c.values()).collect();
    let mut rows = Vec::with_capacity(n - p);
    let mut targets = Vec::with_capacity(n - p);
    for t in p..n {
        let mut row = Vec::with_capacity(cols.len() * p);
        for col in &cols {
            for l in 1..=p {
                row.push(col[t - l]);
            }
        }
        rows.push(row);
        targets.push(cols.iter().map(|c| c[t]).collect::<Vec<f64>>());
    }
    Ok((rows, targets))
}

pub fn fit_var(dataset: &Dataset, p: usize) -> Result<VarModel> {
    if p == 0 {
        return Err(Error::invalid("VAR lag order must be at least 1"));
    }
    let (rows, targets) = var_design(dataset, p)?;
    let x = Matrix::from_rows(&rows)?;
    let k = dataset.columns().count();
    let mut equations = Vec::with_capacity(k);
    let mut jittered = false;
    for eq in 0..k {
        let y: Vec<f64> = targets.iter().map(|t| t[eq]).collect();
        let fit = ols_solve(&x, &y, true)?;
        jittered |= fit.jittered;
        let mut coef = vec![fit.intercept];
        coef.extend(fit.coefficients);
        equations.push(coef);
    }
    Ok(VarModel {
        p,
        column_names: dataset.columns().map(|c| c.name().to_string()).collect(),
        equations,
        jittered,
    })
}

impl VarModel {
    /// Width of the lag row this model consumes.
    pub fn input_width(&self) -> usize {
        self.column_names.len() * self.p
    }

    /// Predict one column's next value from a lag row laid out like the
    /// training design.
    pub fn predict_equation(&self, equation: usize, lag_row: &[f64]) -> Result<f64> {
        if lag_row.len() != self.input_width() {
            return Err(Error::invalid(format!(
                "expected lag row of width {}, got {}",
                self.input_width(),
                lag_row.len()
            )));
        }
        let coef = &self.equations[equation];
        Ok(coef[0] + coef[1..].iter().zip(lag_row).map(|(c, v)| c * v).sum::<f64>())
    }

    /// Lag row for predicting index `t` (0-based within the dataset).
    pub fn lag_row_for(&self, dataset: &Dataset, t: usize) -> Result<Vec<f64>> {
        if t < self.p || t > dataset.len() {
            return Err(Error::invalid(format!("index {t} outside usable range")));
        }
        let mut row = Vec::with_capacity(self.input_width());
        for col in dataset.columns() {
            for l in 1..=self.p {
                row.push(col.values()[t - l]);
            }
        }
        Ok(row)
    }
}

/// BVAR(p, λ): the VAR design solved per equation with ridge shrinkage
/// toward a diagonal random-walk prior (coefficient 1 on the column's own
/// first lag, 0 elsewhere, 0 intercept):
/// `β = (XᵀX + λI)⁻¹ (Xᵀy + λβ₀)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BvarModel {
    pub var: VarModel,
    pub shrinkage: f64,
}

pub fn fit_bvar(dataset: &Dataset, p: usize, shrinkage: f64) -> Result<BvarModel> {
    if p == 0 {
        return Err(Error::invalid("BVAR lag order must be at least 1"));
    }
    if shrinkage < 0.0 {
        return Err(Error::invalid("shrinkage must be non-negative"));
    }
    let (rows, targets) = var_design(dataset, p)?;
    let k = dataset.columns().count();
    let width = k * p + 1;

    // Design with explicit intercept column so the prior can address it.
    let full_rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut v = Vec::with_capacity(width);
            v.push(1.0);
            v.extend_from_slice(r);
            v
        })
        .collect();
    let x = Matrix::from_rows(&full_rows)?;
    let mut gram = x.gram();
    for i in 0..width {
        gram.set(i, i, gram.get(i, i) + shrinkage);
    }

    let mut equations = Vec::with_capacity(k);
    for eq in 0..k {
        let y: Vec<f64> = targets.iter().map(|t| t[eq]).collect();
        let mut rhs = x.transpose_mul_vec(&y);
        // Prior mean: own first lag carries 1. Column layout: intercept,
        // then block `eq` starts at 1 + eq*p.
        let own_lag1 = 1 + eq * p;
        rhs[own_lag1] += shrinkage;
        let beta = cholesky_solve(&gram, &rhs)
            .ok_or_else(|| Error::RankDeficient("BVAR gram not positive definite".into()))?;
        equations.push(beta);
    }
    Ok(BvarModel {
        var: VarModel {
            p,
            column_names: dataset.columns().map(|c| c.name().to_string()).collect(),
            equations,
            jittered: false,
        },
        shrinkage,
    })
}

/// Engle-Granger two-step error-correction model on level data.
///
/// Step 1 regresses the target level on feature levels (the cointegrating
/// relation); step 2 regresses the target's first difference on the lagged
/// cointegration residual plus one lag of every column's difference.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VecmModel {
    /// Cointegrating regression: intercept then one weight per feature.
    pub cointegration: Vec<f64>,
    /// Error-correction equation: intercept, loading on `z[t-1]`, then
    /// coefficients on `Δtarget[t-1]` and `Δfeature_j[t-1]`.
    pub correction: Vec<f64>,
    pub column_names: Vec<String>,
    pub jittered: bool,
}

pub fn fit_vecm(levels: &Dataset) -> Result<VecmModel> {
    let n = levels.len();
    let k_feats = levels.features().len();
    if n < k_feats + 6 {
        return Err(Error::degenerate("VECM needs a longer level history"));
    }

    // Step 1: cointegrating OLS on levels.
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|t| levels.features().iter().map(|f| f.values()[t]).collect())
        .collect();
    let x = Matrix::from_rows(&rows)?;
    let step1 = ols_solve(&x, levels.target().values(), true)?;
    let mut cointegration = vec![step1.intercept];
    cointegration.extend(step1.coefficients.iter());
    let z: Vec<f64> = step1.residuals;

    // Step 2: error correction on differences.
    let mut design = Vec::with_capacity(n - 2);
    let mut target = Vec::with_capacity(n - 2);
    let tv = levels.target().values();
    for t in 2..n {
        let mut row = Vec::with_capacity(2 + k_feats);
        row.push(z[t - 1]);
        row.push(tv[t - 1] - tv[t - 2]);
        for f in levels.features() {
            row.push(f.values()[t - 1] - f.values()[t - 2]);
        }
        design.push(row);
        target.push(tv[t] - tv[t - 1]);
    }
    let x2 = Matrix::from_rows(&design)?;
    let step2 = ols_solve(&x2, &target, true)?;
    let mut correction = vec![step2.intercept];
    correction.extend(step2.coefficients.iter());

    Ok(VecmModel {
        cointegration,
        correction,
        column_names: levels.columns().map(|c| c.name().to_string()).collect(),
        jittered: step1.jittered || step2.jittered,
    })
}

impl VecmModel {
    /// Cointegration residual at one time point from levels.
    pub fn residual(&self, target_level: f64, feature_levels: &[f64]) -> f64 {
        let fitted = self.cointegration[0]
            + self.cointegration[1..]
                .iter()
                .zip(feature_levels)
                .map(|(c, v)| c * v)
                .sum::<f64>();
        target_level - fitted
    }

    /// Predicted change of the target given the lagged residual and the
    /// lagged differences `[Δtarget, Δfeature...]`.
    pub fn predict_change(&self, z_lag: f64, lagged_diffs: &[f64]) -> Result<f64> {
        if lagged_diffs.len() + 1 != self.correction.len() - 1 {
            return Err(Error::invalid("lagged difference row has the wrong width"));
        }
        Ok(self.correction[0]
            + self.correction[1] * z_lag
            + self.correction[2..]
                .iter()
                .zip(lagged_diffs)
                .map(|(c, v)| c * v)
                .sum::<f64>())
    }

    /// One-step level prediction for index `t` of a level dataset.
    pub fn predict_level(&self, levels: &Dataset, t: usize) -> Result<f64> {
        if t < 2 || t > levels.len() {
            return Err(Error::invalid("need two observed rows before a VECM prediction"));
        }
        let tv = levels.target().values();
        let feats_lag1: Vec<f64> = levels.features().iter().map(|f| f.values()[t - 1]).collect();
        let z_lag = self.residual(tv[t - 1], &feats_lag1);
        let mut diffs = vec![tv[t - 1] - tv[t - 2]];
        for f in levels.features() {
            diffs.push(f.values()[t - 1] - f.values()[t - 2]);
        }
        Ok(tv[t - 1] + self.predict_change(z_lag, &diffs)?)
    }
}

/// One-factor DFM: the factor is the first principal component of the
/// standardized features, an AR(1) propagates it, and the target is
/// regressed on factor lags 1..=3.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DfmModel {
    pub loadings: Vec<f64>,
    pub feature_means: Vec<f64>,
    pub feature_stds: Vec<f64>,
    /// AR(1) on the factor: `[intercept, phi]`.
    pub factor_ar: Vec<f64>,
    /// Target equation: intercept then weights on factor lags 1..=3.
    pub target_eq: Vec<f64>,
    pub factor_lags: usize,
}

pub fn fit_dfm(dataset: &Dataset) -> Result<DfmModel> {
    let k = dataset.features().len();
    if k < 2 {
        return Err(Error::degenerate("DFM needs at least two features"));
    }
    let n = dataset.len();
    let factor_lags = 3usize;
    if n <= factor_lags + 3 {
        return Err(Error::degenerate("DFM needs a longer history"));
    }

    let mut means = vec![0.0; k];
    let mut stds = vec![0.0; k];
    for (j, f) in dataset.features().iter().enumerate() {
        let v = f.values();
        let mu = v.iter().sum::<f64>() / n as f64;
        let var = v.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / n as f64;
        if var <= 0.0 {
            return Err(Error::degenerate(format!("feature '{}' has zero variance", f.name())));
        }
        means[j] = mu;
        stds[j] = var.sqrt();
    }
    let z: Vec<Vec<f64>> = (0..n)
        .map(|t| {
            dataset
                .features()
                .iter()
                .enumerate()
                .map(|(j, f)| (f.values()[t] - means[j]) / stds[j])
                .collect()
        })
        .collect();

    // Leading eigenvector of the correlation matrix by power iteration.
    let mut corr = Matrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            let s: f64 = z.iter().map(|row| row[a] * row[b]).sum::<f64>() / n as f64;
            corr.set(a, b, s);
        }
    }
    let mut v = vec![1.0 / (k as f64).sqrt(); k];
    for _ in 0..200 {
        let w = corr.mul_vec(&v);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        v = w.into_iter().map(|x| x / norm).collect();
    }
    // Sign convention: the largest-magnitude loading is positive.
    let lead = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    if v[lead] < 0.0 {
        for x in &mut v {
            *x = -*x;
        }
    }

    let factor: Vec<f64> = z.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();

    // AR(1) on the factor.
    let ar_rows: Vec<Vec<f64>> = (1..n).map(|t| vec![factor[t - 1]]).collect();
    let ar_y: Vec<f64> = (1..n).map(|t| factor[t]).collect();
    let ar_fit = ols_solve(&Matrix::from_rows(&ar_rows)?, &ar_y, true)?;
    let factor_ar = vec![ar_fit.intercept, ar_fit.coefficients[0]];

    // Target on factor lags.
    let ty = dataset.target().values();
    let t_rows: Vec<Vec<f64>> = (factor_lags..n)
        .map(|t| (1..=factor_lags).map(|l| factor[t - l]).collect())
        .collect();
    let t_y: Vec<f64> = (factor_lags..n).map(|t| ty[t]).collect();
    let t_fit = ols_solve(&Matrix::from_rows(&t_rows)?, &t_y, true)?;
    let mut target_eq = vec![t_fit.intercept];
    target_eq.extend(t_fit.coefficients.iter());

    Ok(DfmModel {
        loadings: v,
        feature_means: means,
        feature_stds: stds,
        factor_ar,
        target_eq,
        factor_lags,
    })
}

impl DfmModel {
    /// Factor score for one feature row.
    pub fn factor_score(&self, features: &[f64]) -> Result<f64> {
        if features.len() != self.loadings.len() {
            return Err(Error::invalid("feature row width mismatch"));
        }
        Ok(features
            .iter()
            .enumerate()
            .map(|(j, v)| (v - self.feature_means[j]) / self.feature_stds[j] * self.loadings[j])
            .sum())
    }

    /// Predict the target from factor lags `[f[t-1], f[t-2], f[t-3]]`.
    pub fn predict_from_factor_lags(&self, lags: &[f64]) -> Result<f64> {
        if lags.len() != self.factor_lags {
            return Err(Error::invalid("factor lag row width mismatch"));
        }
        Ok(self.target_eq[0]
            + self.target_eq[1..].iter().zip(lags).map(|(c, v)| c * v).sum::<f64>())
    }

    /// One-step AR extension of the factor.
    pub fn advance_factor(&self, prev: f64) -> f64 {
        self.factor_ar[0] + self.factor_ar[1] * prev
    }
}
