//! Gaussian priors `x ~ N(0, C)` represented through a factorization `C⁻¹ = BᵀB`.

mod cholesky;
mod second_order;
mod whittle_matern;

pub use cholesky::{banded_cholesky, dense_cholesky};
pub use second_order::{
    build_second_order_prior, calibrate_alpha, variance_spread, AlphaChoice, SecondOrderPrior1D,
    ALPHA_BRACKET,
};
pub use whittle_matern::{build_whittle_matern_prior, LaplacianScaling, WhittleMaternPrecision2D};

use crate::error::{check_len, Result};
use crate::operators::{BandLu, BandMatrix, DenseMatrix, LinearOperator};
use crate::Real;

/// Zero-mean Gaussian prior with precision `C⁻¹ = BᵀB` and an invertible band factor `B`.
#[derive(Debug, Clone)]
pub struct GaussianPrior<T: Real> {
    factor: BandMatrix<T>,
    lu: BandLu<T>,
}

impl<T: Real> GaussianPrior<T> {
    /// Wraps an invertible band factor `B` (triangular or not).
    pub fn from_factor(factor: BandMatrix<T>) -> Result<Self> {
        let lu = factor.lu()?;
        Ok(Self { factor, lu })
    }

    /// White prior, `B = I`.
    pub fn identity(n: usize) -> Self {
        Self::from_factor(BandMatrix::identity(n)).expect("identity is invertible")
    }

    /// Prior with the given dense SPD precision matrix; `B` is its upper Cholesky factor.
    pub fn from_precision_dense(precision: &DenseMatrix<T>) -> Result<Self> {
        Self::from_factor(dense_cholesky(precision)?)
    }

    /// Prior with covariance `C`; the precision `C⁻¹` is formed by a dense solve.
    pub fn from_covariance_dense(cov: &DenseMatrix<T>) -> Result<Self> {
        let n = cov.rows();
        check_len("covariance must be square", n, cov.cols())?;
        let mut prec = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            prec.set_column(j, &crate::operators::lu_solve(cov, &e)?);
        }
        // symmetrize rounding
        let prec = DenseMatrix::from_fn(n, n, |i, j| T::lit(0.5) * (prec[(i, j)] + prec[(j, i)]));
        Self::from_precision_dense(&prec)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.factor.dim()
    }

    pub fn factor(&self) -> &BandMatrix<T> {
        &self.factor
    }

    pub fn apply_b(&self, x: &[T]) -> Result<Vec<T>> {
        self.factor.apply(x)
    }

    pub fn apply_bt(&self, x: &[T]) -> Result<Vec<T>> {
        self.factor.apply_adjoint(x)
    }

    pub fn solve_b(&self, y: &[T]) -> Result<Vec<T>> {
        check_len("solve_b", self.dim(), y.len())?;
        let mut x = y.to_vec();
        self.lu.solve_in_place(&mut x);
        Ok(x)
    }

    pub fn solve_bt(&self, y: &[T]) -> Result<Vec<T>> {
        check_len("solve_bt", self.dim(), y.len())?;
        let mut x = y.to_vec();
        self.lu.solve_transpose_in_place(&mut x);
        Ok(x)
    }

    #[inline]
    pub(crate) fn solve_b_in_place(&self, x: &mut [T]) {
        self.lu.solve_in_place(x)
    }

    #[inline]
    pub(crate) fn solve_bt_in_place(&self, x: &mut [T]) {
        self.lu.solve_transpose_in_place(x)
    }

    /// `C x = B⁻¹ B⁻ᵀ x`.
    pub fn apply_c(&self, x: &[T]) -> Result<Vec<T>> {
        let mut y = self.solve_bt(x)?;
        self.lu.solve_in_place(&mut y);
        Ok(y)
    }

    /// `C⁻¹ x = BᵀB x`.
    pub fn apply_precision(&self, x: &[T]) -> Result<Vec<T>> {
        self.apply_bt(&self.apply_b(x)?)
    }

    /// `⟨x, y⟩_C = xᵀ C⁻¹ y`.
    pub fn c_inner(&self, x: &[T], y: &[T]) -> Result<T> {
        let bx = self.apply_b(x)?;
        let by = self.apply_b(y)?;
        Ok(crate::operators::vector::dot(&bx, &by))
    }

    /// Pointwise prior variances `diag(C)`.
    pub fn variances(&self) -> Vec<T> {
        let n = self.dim();
        let mut e = vec![T::zero(); n];
        (0..n)
            .map(|i| {
                e.iter_mut().for_each(|v| *v = T::zero());
                e[i] = T::one();
                // diag(C)_i = ‖B⁻ᵀ eᵢ‖²
                self.lu.solve_transpose_in_place(&mut e);
                crate::operators::vector::dot(&e, &e)
            })
            .collect()
    }

    pub fn dense_factor(&self) -> DenseMatrix<T> {
        self.factor.to_dense()
    }

    /// Dense `B⁻¹`.
    pub fn dense_factor_inverse(&self) -> DenseMatrix<T> {
        let n = self.dim();
        let mut out = DenseMatrix::zeros(n, n);
        let mut e = vec![T::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = T::zero());
            e[j] = T::one();
            self.lu.solve_in_place(&mut e);
            out.set_column(j, &e);
        }
        out
    }

    /// Dense `C⁻¹ = BᵀB`.
    pub fn dense_precision(&self) -> DenseMatrix<T> {
        let b = self.dense_factor();
        b.tr_matmul(&b).expect("square factor")
    }

    /// Dense `C` via the solve chain.
    pub fn dense_covariance(&self) -> DenseMatrix<T> {
        let n = self.dim();
        let mut out = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            out.set_column(j, &self.apply_c(&e).expect("dimension checked"));
        }
        out
    }
}
