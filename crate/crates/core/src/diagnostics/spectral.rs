use crate::error::{check_len, Result};
use crate::operators::{vector, DenseMatrix, LinearOperator, Svd};
use crate::Real;

/// Leading eigenpairs of `AᵀA`, obtained from the SVD of `A` (`λᵢ = σᵢ²`).
///
/// Only the `min(m, n)` leading pairs are kept; the remaining eigenvalues are zero and
/// their eigenvectors span `N(A)`.
#[derive(Debug, Clone)]
pub struct SpectralData<T: Real> {
    /// Nonincreasing.
    pub eigenvalues: Vec<T>,
    /// Columns are the eigenvectors `qᵢ`.
    pub eigenvectors: DenseMatrix<T>,
    /// Number of eigenvalues above `rank_tol² · λ_max`.
    pub rank: usize,
    /// `m` of the underlying operator.
    pub nrows: usize,
}

impl<T: Real> SpectralData<T> {
    pub fn from_matrix(a: &DenseMatrix<T>) -> Result<Self> {
        let svd = Svd::thin(a)?;
        let rank = svd.rank();
        Ok(Self {
            eigenvalues: svd.singular_values.iter().map(|&s| s * s).collect(),
            eigenvectors: svd.v,
            rank,
            nrows: a.rows(),
        })
    }

    /// Spectrum of `AᵀA` for any operator, through its dense realization.
    pub fn from_operator<O: LinearOperator<T> + ?Sized>(op: &O) -> Result<Self> {
        Self::from_matrix(&DenseMatrix::from_operator(op))
    }

    /// `(λᵢ, qᵢ)` for the nonzero eigenvalues.
    pub fn nonzero(&self) -> impl Iterator<Item = (T, Vec<T>)> + '_ {
        (0..self.rank).map(move |i| (self.eigenvalues[i], self.eigenvectors.column(i)))
    }

    pub fn lambda_max(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or(T::zero())
    }

    pub fn lambda_min_nonzero(&self) -> T {
        if self.rank == 0 {
            T::zero()
        } else {
            self.eigenvalues[self.rank - 1]
        }
    }

    /// `λ_max / λ_min` over the nonzero spectrum.
    pub fn condition_number(&self) -> T {
        self.lambda_max() / self.lambda_min_nonzero()
    }

    /// `(r₀ᵀqᵢ)²` for the nonzero eigenpairs.
    pub fn squared_projections(&self, r0: &[T]) -> Result<Vec<T>> {
        check_len("spectral projection", self.eigenvectors.rows(), r0.len())?;
        Ok(self
            .nonzero()
            .map(|(_, q)| {
                let c = vector::dot(&q, r0);
                c * c
            })
            .collect())
    }
}

/// `|r₀ᵀqᵢ|` for every eigenvector with nonzero eigenvalue, in eigenvalue order.
pub fn eigen_projections<T: Real>(spectral: &SpectralData<T>, r0: &[T]) -> Result<Vec<T>> {
    Ok(spectral
        .squared_projections(r0)?
        .into_iter()
        .map(|c| c.sqrt())
        .collect())
}
