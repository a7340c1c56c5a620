use crate::error::{check_len, Error, Result};
use crate::operators::{vector, DenseMatrix, Svd};
use crate::Real;

/// Orthogonal projector onto `N(A)`, held implicitly as `P = I − V_r V_rᵀ`, where
/// `V_r` spans `R(Aᵀ)`.
#[derive(Debug, Clone)]
pub struct NullspaceProjector<T: Real> {
    range_basis: DenseMatrix<T>,
}

impl<T: Real> NullspaceProjector<T> {
    pub fn dim(&self) -> usize {
        self.range_basis.rows()
    }

    /// `rank(A)`
    pub fn rank(&self) -> usize {
        self.range_basis.cols()
    }

    /// Orthonormal basis of `R(Aᵀ)`.
    pub fn range_basis(&self) -> &DenseMatrix<T> {
        &self.range_basis
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        check_len("nullspace projector", self.dim(), x.len())?;
        let mut out = x.to_vec();
        for j in 0..self.rank() {
            let v = self.range_basis.column(j);
            let c = vector::dot(&v, x);
            vector::axpy(-c, &v, &mut out);
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let vvt = self
            .range_basis
            .matmul(&self.range_basis.transpose())
            .expect("conforming");
        DenseMatrix::identity(self.dim()).sub(&vvt).expect("conforming")
    }
}

/// Projector onto the null space of `A` (right singular vectors with `σ ≤ rank_tol·σ_max`).
pub fn nullspace_projector<T: Real>(a: &DenseMatrix<T>) -> Result<NullspaceProjector<T>> {
    let svd = Svd::thin(a)?;
    let r = svd.rank();
    Ok(NullspaceProjector {
        range_basis: svd.v.columns_range(0, r),
    })
}

/// `ν = ‖P x‖ / ‖x‖`, the fraction of `x` invisible to the data.
pub fn nullspace_fraction<T: Real>(p: &NullspaceProjector<T>, x: &[T]) -> Result<T> {
    let nx = vector::norm2(x);
    if nx == T::zero() {
        return Err(Error::ZeroVector("nullspace_fraction"));
    }
    let px = p.apply(x)?;
    Ok((vector::norm2(&px) / nx).min(T::one()))
}
