//! Linear operators: the forward map `A`, its adjoint, and concrete realizations.

mod band;
mod dense;
mod sparse;
pub mod svd;
pub mod vector;

pub use band::{BandLu, BandMatrix};
pub use dense::{lu_solve, DenseMatrix};
pub use sparse::SparseMatrix;
pub use svd::{HouseholderQr, Svd};

use crate::error::{check_len, Result};
use crate::priors::GaussianPrior;
use crate::Real;

/// A matrix-free linear map `A: Rⁿ → Rᵐ` together with its adjoint.
///
/// Implementors provide the unchecked `*_into` kernels; the checked
/// `apply`/`apply_adjoint` wrappers validate dimensions.
pub trait LinearOperator<T: Real> {
    /// `m`
    fn nrows(&self) -> usize;
    /// `n`
    fn ncols(&self) -> usize;

    /// `y = A x` with `x.len() == ncols()` and `y.len() == nrows()`.
    fn apply_into(&self, x: &[T], y: &mut [T]);

    /// `y = Aᵀ u` with `u.len() == nrows()` and `y.len() == ncols()`.
    fn apply_adjoint_into(&self, u: &[T], y: &mut [T]);

    fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        check_len("apply: input length vs ncols", self.ncols(), x.len())?;
        let mut y = vec![T::zero(); self.nrows()];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    fn apply_adjoint(&self, u: &[T]) -> Result<Vec<T>> {
        check_len("apply_adjoint: input length vs nrows", self.nrows(), u.len())?;
        let mut y = vec![T::zero(); self.ncols()];
        self.apply_adjoint_into(u, &mut y);
        Ok(y)
    }
}

impl<T: Real, O: LinearOperator<T> + ?Sized> LinearOperator<T> for &O {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn apply_into(&self, x: &[T], y: &mut [T]) {
        (**self).apply_into(x, y)
    }
    fn apply_adjoint_into(&self, u: &[T], y: &mut [T]) {
        (**self).apply_adjoint_into(u, y)
    }
}

impl<T: Real, O: LinearOperator<T> + ?Sized> LinearOperator<T> for Box<O> {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn apply_into(&self, x: &[T], y: &mut [T]) {
        (**self).apply_into(x, y)
    }
    fn apply_adjoint_into(&self, u: &[T], y: &mut [T]) {
        (**self).apply_adjoint_into(u, y)
    }
}

/// `Iₙ`
#[derive(Debug, Clone, Copy)]
pub struct IdentityOperator {
    pub n: usize,
}

impl<T: Real> LinearOperator<T> for IdentityOperator {
    fn nrows(&self) -> usize {
        self.n
    }
    fn ncols(&self) -> usize {
        self.n
    }
    fn apply_into(&self, x: &[T], y: &mut [T]) {
        y.copy_from_slice(x);
    }
    fn apply_adjoint_into(&self, u: &[T], y: &mut [T]) {
        y.copy_from_slice(u);
    }
}

/// `c · A`
#[derive(Debug, Clone)]
pub struct ScaledOperator<O> {
    pub base: O,
    pub factor: f64,
}

impl<T: Real, O: LinearOperator<T>> LinearOperator<T> for ScaledOperator<O> {
    fn nrows(&self) -> usize {
        self.base.nrows()
    }
    fn ncols(&self) -> usize {
        self.base.ncols()
    }
    fn apply_into(&self, x: &[T], y: &mut [T]) {
        self.base.apply_into(x, y);
        vector::scale(T::lit(self.factor), y);
    }
    fn apply_adjoint_into(&self, u: &[T], y: &mut [T]) {
        self.base.apply_adjoint_into(u, y);
        vector::scale(T::lit(self.factor), y);
    }
}

/// Right-priorconditioned operator `Ã = A B⁻¹`.
#[derive(Debug, Clone)]
pub struct PriorconditionedOperator<'a, T: Real, O> {
    base: O,
    prior: &'a GaussianPrior<T>,
}

impl<'a, T: Real, O: LinearOperator<T>> PriorconditionedOperator<'a, T, O> {
    pub fn new(base: O, prior: &'a GaussianPrior<T>) -> Result<Self> {
        check_len("priorconditioner dimension vs ncols", base.ncols(), prior.dim())?;
        Ok(Self { base, prior })
    }

    pub fn base(&self) -> &O {
        &self.base
    }

    pub fn prior(&self) -> &GaussianPrior<T> {
        self.prior
    }
}

impl<T: Real, O: LinearOperator<T>> LinearOperator<T> for PriorconditionedOperator<'_, T, O> {
    fn nrows(&self) -> usize {
        self.base.nrows()
    }
    fn ncols(&self) -> usize {
        self.base.ncols()
    }
    fn apply_into(&self, w: &[T], y: &mut [T]) {
        let mut x = w.to_vec();
        self.prior.solve_b_in_place(&mut x);
        self.base.apply_into(&x, y);
    }
    fn apply_adjoint_into(&self, u: &[T], y: &mut [T]) {
        self.base.apply_adjoint_into(u, y);
        self.prior.solve_bt_in_place(y);
    }
}
