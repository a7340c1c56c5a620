//! CGLS and priorconditioned CGLS with discrepancy-principle stopping.

mod cgls;
mod direct;
mod noise;

pub use cgls::{cgls_solve, pcgls_solve, STAGNATION_RATIO};
pub use direct::{tikhonov_map_direct, DIRECT_SIZE_LIMIT};
pub use noise::{add_noise, standard_normals};

use crate::error::{check_len, Error, Result};
use crate::operators::{LinearOperator, ScaledOperator};
use crate::Real;

/// Linear observation model `b = A x + ε`, `ε ~ N(0, σ² I)`.
#[derive(Debug, Clone)]
pub struct ObservationModel<T: Real, O> {
    pub op: O,
    pub b: Vec<T>,
    pub sigma: T,
}

impl<T: Real, O: LinearOperator<T>> ObservationModel<T, O> {
    pub fn new(op: O, b: Vec<T>, sigma: T) -> Result<Self> {
        check_len("observation length vs nrows", op.nrows(), b.len())?;
        if !(sigma > T::zero()) || !sigma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "noise level must be positive, got {sigma}"
            )));
        }
        Ok(Self { op, b, sigma })
    }

    /// `τ·m·σ²`, the squared-discrepancy level at which iteration stops.
    pub fn discrepancy_threshold(&self, tau: f64) -> T {
        T::lit(tau) * T::lit(self.b.len() as f64) * self.sigma * self.sigma
    }

    /// Borrowing view of this model.
    pub fn as_ref(&self) -> ObservationModel<T, &O> {
        ObservationModel {
            op: &self.op,
            b: self.b.clone(),
            sigma: self.sigma,
        }
    }
}

/// Rescales the model to unit noise variance: `A/σ`, `b/σ`, `σ = 1`.
pub fn whiten<T: Real, O: LinearOperator<T>>(
    model: &ObservationModel<T, O>,
) -> ObservationModel<T, ScaledOperator<&O>> {
    let inv = T::one() / model.sigma;
    ObservationModel {
        op: ScaledOperator {
            base: &model.op,
            factor: inv.to_f64_lossy(),
        },
        b: model.b.iter().map(|&v| v * inv).collect(),
        sigma: T::one(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Safeguard factor `τ ≥ 1`.
    pub tau: f64,
    pub max_iter: usize,
    /// Keep the normalized normal-equation residuals `v_j`.
    pub record_basis: bool,
    pub record_iterates: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tau: 1.2,
            max_iter: 500,
            record_basis: true,
            record_iterates: true,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau >= 1.0) || !self.tau.is_finite() {
            return Err(Error::InvalidArgument(format!("tau must be >= 1, got {}", self.tau)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Discrepancy,
    MaxIter,
    Stagnation,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Discrepancy => "DISCREPANCY",
            StopReason::MaxIter => "MAX_ITER",
            StopReason::Stagnation => "STAGNATION",
        }
    }
}

/// Full history of a CGLS run.
///
/// After `k` iterations: `alphas` holds `α_0…α_{k-1}`; `betas` holds `β_0…β_{k-2}`
/// (the coefficient at the terminating step is never formed, so `betas.len() == k - 1`
/// for `k ≥ 1`); norms and iterates hold entries for `j = 0…k`; `basis` holds
/// `v_0…v_{k-1}`. For PCGLS the iterates are `x̃_j = B⁻¹w_j` while the norms, coefficients
/// and basis belong to the `w`-space iteration.
#[derive(Debug, Clone)]
pub struct IterationTrace<T> {
    pub iterates: Vec<Vec<T>>,
    pub alphas: Vec<T>,
    pub betas: Vec<T>,
    /// `‖b − A x_j‖`
    pub discrepancy_norms: Vec<T>,
    /// `‖Aᵀ(b − A x_j)‖`
    pub nres_norms: Vec<T>,
    pub basis: Option<Vec<Vec<T>>>,
    pub stop_reason: StopReason,
    /// `τ·m·σ²`
    pub threshold: T,
}

impl<T: Real> IterationTrace<T> {
    /// Number of completed iterations `k`.
    pub fn iterations(&self) -> usize {
        self.alphas.len()
    }
}
