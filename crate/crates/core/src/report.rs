//! Computed norm values with the parameters that produced them.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    ExactSpectral,
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub estimator: EstimatorKind,
    /// Resolved inputs: grid, weight, symbols, truncations, trials, seed.
    pub params: Value,
    /// Per-level or per-prefix curve, empty when not applicable.
    pub curve: Vec<f64>,
    /// Standard error of value^p for Monte Carlo estimates.
    pub std_error: Option<f64>,
    /// Levels dropped by the Nyquist or torus guards.
    pub excluded_levels: Vec<i64>,
}

impl NormReport {
    pub fn new(value: f64, estimator: EstimatorKind, params: Value) -> Self {
        NormReport { value, estimator, params, curve: vec![], std_error: None, excluded_levels: vec![] }
    }
}
