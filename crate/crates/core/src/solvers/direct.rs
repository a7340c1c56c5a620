use crate::error::{Error, Result};
use crate::operators::{DenseMatrix, LinearOperator};
use crate::priors::{dense_cholesky, GaussianPrior};
use crate::solvers::ObservationModel;
use crate::Real;

/// Largest `n` for which the dense normal equations are formed.
pub const DIRECT_SIZE_LIMIT: usize = 5000;

/// MAP estimate from the dense normal equations `(AᵀA + BᵀB) x = Aᵀb`.
pub fn tikhonov_map_direct<T: Real, O: LinearOperator<T>>(
    model: &ObservationModel<T, O>,
    prior: &GaussianPrior<T>,
) -> Result<Vec<T>> {
    let n = model.op.ncols();
    if n > DIRECT_SIZE_LIMIT {
        return Err(Error::TooLarge {
            what: "MAP normal equations",
            n,
            limit: DIRECT_SIZE_LIMIT,
        });
    }
    crate::error::check_len("prior dimension", n, prior.dim())?;
    let a = DenseMatrix::from_operator(&model.op);
    let normal = a.tr_matmul(&a)?.add(&prior.dense_precision())?;
    let normal = DenseMatrix::from_fn(n, n, |i, j| T::lit(0.5) * (normal[(i, j)] + normal[(j, i)]));
    let rhs = model.op.apply_adjoint(&model.b)?;
    let r = dense_cholesky(&normal).map_err(|e| match e {
        Error::NotPositiveDefinite { row, .. } => Error::SingularFactor { row },
        other => other,
    })?;
    let lu = r.lu()?;
    let mut x = rhs;
    // RᵀR x = rhs
    lu.solve_transpose_in_place(&mut x);
    lu.solve_in_place(&mut x);
    Ok(x)
}
