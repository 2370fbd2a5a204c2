//! Ridge and elastic-net regression over the lagged supervised matrix,
//! backed by the shared coordinate-descent solver.

use crate::error::Result;
use crate::numerics::{elastic_net, ElasticNetFit};
use crate::series::SupervisedMatrix;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PenalizedModel {
    pub l1: f64,
    pub l2: f64,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub converged: bool,
}

pub fn fit_penalized(sm: &SupervisedMatrix, l1: f64, l2: f64) -> Result<PenalizedModel> {
    let x = sm.design_matrix()?;
    let fit: ElasticNetFit = elastic_net(&x, &sm.targets, l1, l2, 1e-8, 100_000)?;
    Ok(PenalizedModel {
        l1,
        l2,
        coefficients: fit.coefficients,
        intercept: fit.intercept,
        converged: fit.converged,
    })
}

impl PenalizedModel {
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.coefficients.len() {
            return Err(crate::error::Error::invalid(format!(
                "expected {} features, got {}",
                self.coefficients.len(),
                x.len()
            )));
        }
        Ok(self.intercept + self.coefficients.iter().zip(x).map(|(b, v)| b * v).sum::<f64>())
    }
}
