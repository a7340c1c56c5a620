use super::lanczos::ritz_history;
use super::nullspace::{nullspace_fraction, NullspaceProjector};
use super::spectral::{eigen_projections, SpectralData};
use super::theorems::{bound_margins, xi_history};
use crate::error::{Error, Result};
use crate::solvers::IterationTrace;
use crate::Real;

/// Per-iteration diagnostics of one CGLS or PCGLS run.
#[derive(Debug, Clone, Default)]
pub struct DiagnosticsReport<T: Real> {
    /// `ν_k` per recorded iterate; `None` for the zero iterate.
    pub nullspace_fractions: Vec<Option<T>>,
    /// Ritz values of `T_k`, `k = 1..=K`.
    pub ritz_history: Vec<Vec<T>>,
    pub eigen_projections: Vec<T>,
    pub orth_index_min: Option<T>,
    pub orth_index_max: Option<T>,
    /// `ξ_k`, `k = 0..=K`.
    pub xi_history: Vec<Option<T>>,
    /// `k = 0..=K`.
    pub bound_margins: Vec<T>,
}

/// Everything the report needs besides the trace.
pub struct DiagnosticsInputs<'a, T: Real> {
    /// Spectrum of the operator the trace was computed with (`A` or `AB⁻¹`).
    pub spectral: &'a SpectralData<T>,
    /// Projector onto `N(A)` for the original operator.
    pub projector: Option<&'a NullspaceProjector<T>>,
    pub orth_index: Option<(T, T)>,
}

impl<T: Real> DiagnosticsReport<T> {
    pub fn build(trace: &IterationTrace<T>, inputs: &DiagnosticsInputs<'_, T>) -> Result<Self> {
        let nullspace_fractions = match inputs.projector {
            Some(p) => trace
                .iterates
                .iter()
                .map(|x| match nullspace_fraction(p, x) {
                    Ok(v) => Ok(Some(v)),
                    Err(Error::ZeroVector(_)) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let eigen_projections = match trace.basis.as_ref().and_then(|b| b.first()) {
            Some(v0) => {
                let r0: Vec<T> = v0.iter().map(|&v| v * trace.nres_norms[0]).collect();
                eigen_projections(inputs.spectral, &r0)?
            }
            None => Vec::new(),
        };
        let xi = if trace.basis.as_ref().is_some_and(|b| !b.is_empty()) {
            xi_history(trace, inputs.spectral)?
        } else {
            vec![None; trace.alphas.len() + 1]
        };
        Ok(Self {
            nullspace_fractions,
            ritz_history: ritz_history(trace)?,
            eigen_projections,
            orth_index_min: inputs.orth_index.map(|o| o.0),
            orth_index_max: inputs.orth_index.map(|o| o.1),
            xi_history: xi,
            bound_margins: bound_margins(trace, inputs.spectral)?,
        })
    }
}
