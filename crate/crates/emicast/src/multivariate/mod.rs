//! The multivariate model zoo behind a uniform spec/fit/predict contract.
//!
//! Supervised kinds (ridge, elastic net, tree, forest, SVR, FFNN) consume
//! rows of the lag-3 supervised matrix. System kinds (VAR, BVAR, VECM,
//! DFM) fit on the aligned dataset and consume their own row layouts,
//! exposed through the pipeline.

pub mod ffnn;
pub mod forest;
pub mod linear_system;
pub mod penalized;
pub mod svr;
pub mod tree;

pub use ffnn::{fit_ffnn, FfnnModel};
pub use forest::{fit_forest, ForestModel, Resample};
pub use linear_system::{fit_bvar, fit_dfm, fit_var, fit_vecm, BvarModel, DfmModel, VarModel, VecmModel};
pub use penalized::{fit_penalized, PenalizedModel};
pub use svr::{fit_svr, Kernel, SvrModel};
pub use tree::DecisionTree;

use crate::error::{Error, Result};
use crate::series::{Dataset, SupervisedMatrix};

/// Specification of one multivariate forecaster with its hyperparameters.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind")]
pub enum MultivariateSpec {
    Var { p: usize },
    Bvar { p: usize, shrinkage: f64 },
    Vecm,
    Dfm,
    Ridge { l2: f64 },
    ElasticNet { l1: f64, l2: f64 },
    DecisionTree { max_depth: Option<usize>, min_leaf: usize },
    Rfr { trees: usize, features_per_split: Option<usize>, max_depth: Option<usize>, min_leaf: usize },
    Svr { kernel: SvrKernelSpec, c: f64, epsilon: f64 },
    Ffnn { hidden: usize, learning_rate: f64, epochs: usize },
}

/// Kernel choice in a spec; RBF gamma defaults to `1 / n_features` when
/// not pinned.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kernel")]
pub enum SvrKernelSpec {
    Linear,
    Rbf { gamma: Option<f64> },
}

impl MultivariateSpec {
    pub fn display_name(&self) -> String {
        match self {
            MultivariateSpec::Var { .. } => "VAR".into(),
            MultivariateSpec::Bvar { .. } => "BVAR".into(),
            MultivariateSpec::Vecm => "VECM".into(),
            MultivariateSpec::Dfm => "DFM".into(),
            MultivariateSpec::Ridge { .. } => "Ridge".into(),
            MultivariateSpec::ElasticNet { .. } => "ElasticNet".into(),
            MultivariateSpec::DecisionTree { .. } => "DecisionTree".into(),
            MultivariateSpec::Rfr { .. } => "RFR".into(),
            MultivariateSpec::Svr { .. } => "SVR".into(),
            MultivariateSpec::Ffnn { .. } => "FFNN".into(),
        }
    }

    /// Whether the kind consumes supervised lag rows (as opposed to the
    /// system kinds that read the dataset directly).
    pub fn is_supervised(&self) -> bool {
        matches!(
            self,
            MultivariateSpec::Ridge { .. }
                | MultivariateSpec::ElasticNet { .. }
                | MultivariateSpec::DecisionTree { .. }
                | MultivariateSpec::Rfr { .. }
                | MultivariateSpec::Svr { .. }
                | MultivariateSpec::Ffnn { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MultivariateSpec::Var { p } | MultivariateSpec::Bvar { p, .. } if *p == 0 => {
                Err(Error::invalid("lag order must be at least 1"))
            }
            MultivariateSpec::Bvar { shrinkage, .. } if *shrinkage < 0.0 => {
                Err(Error::invalid("shrinkage must be non-negative"))
            }
            MultivariateSpec::Rfr { trees, .. } if *trees == 0 => {
                Err(Error::invalid("forest needs at least one tree"))
            }
            MultivariateSpec::Svr { c, epsilon, .. } if *c <= 0.0 || *epsilon < 0.0 => {
                Err(Error::invalid("SVR requires C > 0 and epsilon >= 0"))
            }
            MultivariateSpec::Ffnn { hidden, epochs, .. } if *hidden == 0 || *epochs == 0 => {
                Err(Error::invalid("FFNN requires hidden >= 1 and epochs >= 1"))
            }
            _ => Ok(()),
        }
    }
}

/// Fitted multivariate model; every variant serializes with enough state
/// to reload and predict bit-identically.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "model")]
pub enum FittedMultivariate {
    Var(VarModel),
    Bvar(BvarModel),
    Vecm(VecmModel),
    Dfm(DfmModel),
    Penalized(PenalizedModel),
    Tree(DecisionTree),
    Forest(ForestModel),
    Svr(SvrModel),
    Ffnn(FfnnModel),
}

/// A fitted model plus provenance.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FittedModel {
    pub spec: MultivariateSpec,
    pub fitted: FittedMultivariate,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl FittedModel {
    /// One-step prediction from this model's own input row layout:
    /// supervised kinds take a lag-matrix row; VAR/BVAR take their lag
    /// row; DFM takes factor lags; VECM takes `[z_lag, Δy_lag, Δx_lags…]`.
    pub fn predict_step(&self, x: &[f64]) -> Result<f64> {
        match &self.fitted {
            FittedMultivariate::Var(m) => m.predict_equation(0, x),
            FittedMultivariate::Bvar(m) => m.var.predict_equation(0, x),
            FittedMultivariate::Vecm(m) => m.predict_change(x[0], &x[1..]),
            FittedMultivariate::Dfm(m) => m.predict_from_factor_lags(x),
            FittedMultivariate::Penalized(m) => m.predict(x),
            FittedMultivariate::Tree(m) => m.predict(x),
            FittedMultivariate::Forest(m) => m.predict(x),
            FittedMultivariate::Svr(m) => m.predict(x),
            FittedMultivariate::Ffnn(m) => m.predict(x),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fitted model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("model JSON: {e}")))
    }
}

/// Fit a supervised spec on the lag matrix. System specs are fitted with
/// [`fit_system`].
pub fn fit_supervised(spec: &MultivariateSpec, sm: &SupervisedMatrix, seed: u64) -> Result<FittedModel> {
    spec.validate()?;
    if sm.is_empty() {
        return Err(Error::degenerate("empty supervised matrix"));
    }
    let n_features = sm.width();
    let (fitted, warnings) = match spec {
        MultivariateSpec::Ridge { l2 } => {
            let m = fit_penalized(sm, 0.0, *l2)?;
            let w = if m.converged { vec![] } else { vec!["coordinate descent hit max_iter".into()] };
            (FittedMultivariate::Penalized(m), w)
        }
        MultivariateSpec::ElasticNet { l1, l2 } => {
            let m = fit_penalized(sm, *l1, *l2)?;
            let w = if m.converged { vec![] } else { vec!["coordinate descent hit max_iter".into()] };
            (FittedMultivariate::Penalized(m), w)
        }
        MultivariateSpec::DecisionTree { max_depth, min_leaf } => {
            let rows: Vec<usize> = (0..sm.len()).collect();
            let mut rng = crate::numerics::RngStream::new(seed).child("tree").rng();
            let m = DecisionTree::fit(&sm.rows, &sm.targets, &rows, *max_depth, *min_leaf, n_features, &mut rng)?;
            (FittedMultivariate::Tree(m), vec![])
        }
        MultivariateSpec::Rfr { trees, features_per_split, max_depth, min_leaf } => {
            let m_split = features_per_split.unwrap_or((n_features / 3).max(1));
            let m = fit_forest(
                &sm.rows,
                &sm.targets,
                *trees,
                m_split,
                *max_depth,
                *min_leaf,
                Resample::Bootstrap,
                seed,
            )?;
            (FittedMultivariate::Forest(m), vec![])
        }
        MultivariateSpec::Svr { kernel, c, epsilon } => {
            let k = match kernel {
                SvrKernelSpec::Linear => Kernel::Linear,
                SvrKernelSpec::Rbf { gamma } => Kernel::Rbf {
                    gamma: gamma.unwrap_or(1.0 / n_features as f64),
                },
            };
            let m = fit_svr(&sm.rows, &sm.targets, k, *c, *epsilon, 1e-3, 1_000_000)?;
            let w = if m.converged { vec![] } else { vec!["SMO hit the iteration budget".into()] };
            (FittedMultivariate::Svr(m), w)
        }
        MultivariateSpec::Ffnn { hidden, learning_rate, epochs } => {
            let m = fit_ffnn(&sm.rows, &sm.targets, *hidden, *learning_rate, *epochs, seed)?;
            (FittedMultivariate::Ffnn(m), vec![])
        }
        other => {
            return Err(Error::invalid(format!(
                "{} is a system model; fit it with fit_system",
                other.display_name()
            )))
        }
    };
    Ok(FittedModel { spec: spec.clone(), fitted, seed, warnings })
}

/// Fit a system spec. `diffed` is the aligned differenced dataset;
/// `levels` is the raw level dataset (VECM's input).
pub fn fit_system(
    spec: &MultivariateSpec,
    diffed: &Dataset,
    levels: &Dataset,
    seed: u64,
) -> Result<FittedModel> {
    spec.validate()?;
    let (fitted, warnings) = match spec {
        MultivariateSpec::Var { p } => {
            let m = fit_var(diffed, *p)?;
            let w = if m.jittered { vec!["rank-deficient design; jittered solve".into()] } else { vec![] };
            (FittedMultivariate::Var(m), w)
        }
        MultivariateSpec::Bvar { p, shrinkage } => {
            (FittedMultivariate::Bvar(fit_bvar(diffed, *p, *shrinkage)?), vec![])
        }
        MultivariateSpec::Vecm => {
            let m = fit_vecm(levels)?;
            let w = if m.jittered { vec!["rank-deficient design; jittered solve".into()] } else { vec![] };
            (FittedMultivariate::Vecm(m), w)
        }
        MultivariateSpec::Dfm => (FittedMultivariate::Dfm(fit_dfm(diffed)?), vec![]),
        other => {
            return Err(Error::invalid(format!(
                "{} is a supervised model; fit it with fit_supervised",
                other.display_name()
            )))
        }
    };
    Ok(FittedModel { spec: spec.clone(), fitted, seed, warnings })
}

/// Default hyperparameters for the full zoo, in report order.
pub fn default_zoo() -> Vec<MultivariateSpec> {
    vec![
        MultivariateSpec::Dfm,
        MultivariateSpec::Ffnn { hidden: 8, learning_rate: 0.01, epochs: 2000 },
        MultivariateSpec::Var { p: 1 },
        MultivariateSpec::Bvar { p: 1, shrinkage: 0.2 },
        MultivariateSpec::Vecm,
        MultivariateSpec::Ridge { l2: 1.0 },
        MultivariateSpec::ElasticNet { l1: 0.1, l2: 0.1 },
        MultivariateSpec::Svr { kernel: SvrKernelSpec::Rbf { gamma: None }, c: 10.0, epsilon: 0.01 },
        MultivariateSpec::Rfr { trees: 200, features_per_split: None, max_depth: None, min_leaf: 2 },
        MultivariateSpec::DecisionTree { max_depth: None, min_leaf: 2 },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use crate::series::{build_lag_matrix, TimeSeries};

    fn toy_dataset(seed: u64, n: usize) -> Dataset {
        let mut rng = RngStream::new(seed).child("mv").rng();
        let target: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
        let features: Vec<TimeSeries> = (0..3)
            .map(|j| {
                let vals: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
                TimeSeries::new(format!("f{j}"), 1950, vals).unwrap()
            })
            .collect();
        Dataset::new(TimeSeries::new("y", 1950, target).unwrap(), features).unwrap()
    }

    #[test]
    fn supervised_specs_fit_and_predict() {
        let ds = toy_dataset(1, 60);
        let sm = build_lag_matrix(&ds, 3).unwrap();
        for spec in default_zoo().into_iter().filter(|s| s.is_supervised()) {
            // Shrink the heavy ones for test speed.
            let spec = match spec {
                MultivariateSpec::Rfr { .. } => MultivariateSpec::Rfr {
                    trees: 10,
                    features_per_split: None,
                    max_depth: None,
                    min_leaf: 2,
                },
                MultivariateSpec::Ffnn { .. } => {
                    MultivariateSpec::Ffnn { hidden: 4, learning_rate: 0.01, epochs: 50 }
                }
                s => s,
            };
            let model = fit_supervised(&spec, &sm, 42).unwrap();
            let pred = model.predict_step(&sm.rows[0]).unwrap();
            assert!(pred.is_finite(), "{}", spec.display_name());
            // Width mismatch is an argument error.
            assert!(model.predict_step(&sm.rows[0][..5]).is_err());
        }
    }

    #[test]
    fn system_specs_fit_and_predict() {
        let diffed = toy_dataset(2, 60);
        let levels = toy_dataset(3, 60);
        for spec in [
            MultivariateSpec::Var { p: 1 },
            MultivariateSpec::Bvar { p: 1, shrinkage: 0.2 },
            MultivariateSpec::Vecm,
            MultivariateSpec::Dfm,
        ] {
            let model = fit_system(&spec, &diffed, &levels, 42).unwrap();
            let x = match &model.fitted {
                FittedMultivariate::Var(m) => m.lag_row_for(&diffed, 10).unwrap(),
                FittedMultivariate::Bvar(m) => m.var.lag_row_for(&diffed, 10).unwrap(),
                FittedMultivariate::Vecm(_) => vec![0.1, 0.0, 0.0, 0.0, 0.0],
                FittedMultivariate::Dfm(_) => vec![0.1, -0.2, 0.3],
                _ => unreachable!(),
            };
            assert!(model.predict_step(&x).unwrap().is_finite(), "{}", spec.display_name());
        }
    }

    #[test]
    fn wrong_family_is_rejected() {
        let ds = toy_dataset(4, 50);
        let sm = build_lag_matrix(&ds, 3).unwrap();
        assert!(fit_supervised(&MultivariateSpec::Var { p: 1 }, &sm, 0).is_err());
        assert!(fit_system(&MultivariateSpec::Ridge { l2: 1.0 }, &ds, &ds, 0).is_err());
    }

    #[test]
    fn json_round_trip_preserves_predictions() {
        let ds = toy_dataset(5, 60);
        let sm = build_lag_matrix(&ds, 3).unwrap();
        let spec = MultivariateSpec::Rfr {
            trees: 8,
            features_per_split: Some(4),
            max_depth: Some(4),
            min_leaf: 2,
        };
        let model = fit_supervised(&spec, &sm, 11).unwrap();
        let reloaded = FittedModel::from_json(&model.to_json()).unwrap();
        for row in &sm.rows {
            assert_eq!(
                model.predict_step(row).unwrap().to_bits(),
                reloaded.predict_step(row).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn determinism_across_identical_fits() {
        let ds = toy_dataset(6, 60);
        let sm = build_lag_matrix(&ds, 3).unwrap();
        for spec in [
            MultivariateSpec::Rfr { trees: 5, features_per_split: Some(3), max_depth: None, min_leaf: 2 },
            MultivariateSpec::Ffnn { hidden: 4, learning_rate: 0.01, epochs: 30 },
        ] {
            let a = fit_supervised(&spec, &sm, 99).unwrap();
            let b = fit_supervised(&spec, &sm, 99).unwrap();
            assert_eq!(a, b, "{}", spec.display_name());
        }
    }
}
