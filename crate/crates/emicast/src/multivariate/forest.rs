//! Random forest regression: bootstrap-resampled CARTs with per-split
//! feature subsampling, aggregated by the arithmetic mean.

use crate::error::{Error, Result};
use crate::multivariate::tree::DecisionTree;
use crate::numerics::{bootstrap_sample, RngStream};

/// Row resampling scheme. `Identity` is a test hook that feeds every tree
/// the untouched training set, collapsing a single-tree forest onto the
/// plain CART.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Resample {
    #[default]
    Bootstrap,
    Identity,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
    /// Bootstrap index multiset per tree, recorded for provenance.
    pub samples: Vec<Vec<usize>>,
    pub feature_subset_size: usize,
    pub seed: u64,
}

/// Fit `n_trees` CARTs, each on its own resample with its own derived
/// stream; tree order never affects the aggregate because prediction is a
/// mean.
#[allow(clippy::too_many_arguments)]
pub fn fit_forest(
    xs: &[Vec<f64>],
    ys: &[f64],
    n_trees: usize,
    feature_subset_size: usize,
    max_depth: Option<usize>,
    min_leaf: usize,
    resample: Resample,
    seed: u64,
) -> Result<ForestModel> {
    if n_trees == 0 {
        return Err(Error::invalid("forest needs at least one tree"));
    }
    if xs.is_empty() {
        return Err(Error::degenerate("forest needs training rows"));
    }
    let n = xs.len();
    let root = RngStream::new(seed).child("forest");
    let mut trees = Vec::with_capacity(n_trees);
    let mut samples = Vec::with_capacity(n_trees);
    for t in 0..n_trees {
        let stream = root.child(&format!("tree-{t}"));
        let mut rng = stream.rng();
        let rows = match resample {
            Resample::Bootstrap => bootstrap_sample(n, &mut rng),
            Resample::Identity => (0..n).collect(),
        };
        let tree = DecisionTree::fit(
            xs,
            ys,
            &rows,
            max_depth,
            min_leaf,
            feature_subset_size,
            &mut rng,
        )?;
        trees.push(tree);
        samples.push(rows);
    }
    Ok(ForestModel { trees, samples, feature_subset_size, seed })
}

impl ForestModel {
    /// Arithmetic mean of the individual tree predictions, exactly.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for tree in &self.trees {
            sum += tree.predict(x)?;
        }
        Ok(sum / self.trees.len() as f64)
    }

    pub fn tree_predictions(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.trees.iter().map(|t| t.predict(x)).collect()
    }
}
