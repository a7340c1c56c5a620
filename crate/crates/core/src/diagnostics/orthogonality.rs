use crate::error::{Error, Result};
use crate::operators::svd::orthonormal_basis;
use crate::operators::{DenseMatrix, Svd};
use crate::priors::GaussianPrior;
use crate::Real;

/// Cosines of the extreme principal angles between `N(A)` and `R(Aᵀ)` in the inner
/// product `⟨x, y⟩_C = xᵀ C⁻¹ y`. Returns `(min_cos, max_cos)`.
pub fn c_orthogonality_angles<T: Real>(a: &DenseMatrix<T>, prior: &GaussianPrior<T>) -> Result<(T, T)> {
    let (m, n) = (a.rows(), a.cols());
    crate::error::check_len("c_orthogonality_angles: prior dimension", n, prior.dim())?;
    let svd = Svd::full(a)?;
    let r = svd.rank();
    if r < m || r == 0 || r == n {
        return Err(Error::RankDeficient {
            smallest: svd.singular_values.last().map_or(0.0, |s| s.to_f64_lossy()),
            largest: svd.singular_values.first().map_or(0.0, |s| s.to_f64_lossy()),
        });
    }
    let range = svd.v.columns_range(0, r);
    let null = svd.v.columns_range(r, n);
    let zr = orthonormal_basis(&range.map_columns(n, |c| prior.apply_b(c))?)?;
    let zn = orthonormal_basis(&null.map_columns(n, |c| prior.apply_b(c))?)?;
    let gram = zn.tr_matmul(&zr)?;
    let s = Svd::thin(&gram)?.singular_values;
    let max_cos = s[0].min(T::one());
    let min_cos = s[s.len() - 1].min(T::one());
    Ok((min_cos, max_cos))
}
