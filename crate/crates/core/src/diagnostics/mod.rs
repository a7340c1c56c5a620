//! Subspace and spectral analysis of CGLS runs.

mod gsvd;
mod lanczos;
mod nullspace;
mod orthogonality;
mod report;
mod spectral;
mod theorems;

pub use gsvd::{gsvd, priorconditioned_matrix, GsvdResult};
pub use lanczos::{
    lanczos_tridiagonal, lanczos_tridiagonal_checked, projected_tridiagonal, ritz_history, LanczosView,
    ASYMMETRY_LIMIT,
};
pub use nullspace::{nullspace_fraction, nullspace_projector, NullspaceProjector};
pub use orthogonality::c_orthogonality_angles;
pub use report::{DiagnosticsInputs, DiagnosticsReport};
pub use spectral::{eigen_projections, SpectralData};
pub use theorems::{
    bound_margins, convergence_bound_margin, energy_errors, residual_identity_xi, residual_polynomial_sum,
    xi_history,
};
