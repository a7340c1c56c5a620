use serde::{Deserialize, Serialize};

/// Extreme cosines between `N(A)` and `R(Aᵀ)` in the prior inner product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrthIndex {
    pub min: f64,
    pub max: f64,
}

/// Wall-clock seconds per phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub setup: f64,
    pub solve: f64,
    pub diagnostics: f64,
}

/// Summary of one solver run, written as `report.json`.
///
/// Per-iteration arrays have one entry per iterate `0..=stop_index`. Fields that need the
/// dense diagnostics are `null` when diagnostics are disabled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub stop_index: usize,
    pub stop_reason: String,
    pub discrepancy_history: Vec<f64>,
    /// `null` at the zero iterate.
    pub nullspace_fractions: Option<Vec<Option<f64>>>,
    /// Entry `k` holds the Ritz values of `T_k`; entry 0 is empty.
    pub ritz_history: Option<Vec<Vec<f64>>>,
    pub eigen_projections: Option<Vec<f64>>,
    pub xi_history: Option<Vec<Option<f64>>>,
    pub bound_margins: Option<Vec<f64>>,
    pub ssim_mean: Option<f64>,
    pub orth_index: Option<OrthIndex>,
    pub timings: Option<Timings>,
}
