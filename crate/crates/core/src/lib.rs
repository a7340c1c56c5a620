//! Plain and priorconditioned CGLS for severely underdetermined linear inverse problems.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented for `f32` and
//! `f64`). The aliases at the crate root fix the scalar to `f64`, which is what the
//! experiment runner uses.

pub mod diagnostics;
pub mod error;
pub mod metrics;
pub mod operators;
pub mod priors;
pub mod problems;
mod scalar;
pub mod solvers;

pub use error::{Error, Result};
pub use operators::LinearOperator;
pub use scalar::Real;
pub use solvers::{SolveOptions, StopReason};

pub type DenseMatrix = operators::DenseMatrix<f64>;
pub type SparseMatrix = operators::SparseMatrix<f64>;
pub type BandMatrix = operators::BandMatrix<f64>;
pub type Svd = operators::Svd<f64>;
pub type GaussianPrior = priors::GaussianPrior<f64>;
pub type WhittleMaternPrecision2D = priors::WhittleMaternPrecision2D<f64>;
pub type ObservationModel<O> = solvers::ObservationModel<f64, O>;
pub type IterationTrace = solvers::IterationTrace<f64>;
pub type GsvdResult = diagnostics::GsvdResult<f64>;
pub type LanczosView = diagnostics::LanczosView<f64>;
pub type SpectralData = diagnostics::SpectralData<f64>;
pub type NullspaceProjector = diagnostics::NullspaceProjector<f64>;
pub type Phantom = problems::Phantom<f64>;
pub type SsimResult = metrics::SsimResult<f64>;

pub type DenseMatrix32 = operators::DenseMatrix<f32>;
pub type GaussianPrior32 = priors::GaussianPrior<f32>;
pub type IterationTrace32 = solvers::IterationTrace<f32>;
