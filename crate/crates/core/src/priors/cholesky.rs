use crate::error::{check_len, Error, Result};
use crate::operators::{BandMatrix, DenseMatrix, SparseMatrix};
use crate::Real;

/// Upper-triangular band Cholesky factor `R` with `K = RᵀR`.
///
/// `bandwidth` must bound `|i - j|` over the nonzeros of `K`; the factor keeps it.
pub fn banded_cholesky<T: Real>(k: &SparseMatrix<T>, bandwidth: usize) -> Result<BandMatrix<T>> {
    use crate::operators::LinearOperator;
    let n = k.nrows();
    check_len("banded_cholesky: square matrix", n, k.ncols())?;
    let mut scale = T::zero();
    for i in 0..n {
        let (cols, vals) = k.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if i.abs_diff(j) > bandwidth && v != T::zero() {
                return Err(Error::OutsideBand {
                    row: i,
                    col: j,
                    bandwidth,
                });
            }
            scale = scale.max(v.abs());
        }
    }
    let sym_tol = T::lit(1e-12) * scale.max(T::min_positive_value());
    for i in 0..n {
        let (cols, vals) = k.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            let gap = (v - k.get(j, i)).abs();
            if gap > sym_tol {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    gap: gap.to_f64_lossy(),
                });
            }
        }
    }

    let mut r = BandMatrix::zeros(n, 0, bandwidth);
    for i in 0..n {
        let top = i.saturating_sub(bandwidth);
        let mut d = k.get(i, i);
        for p in top..i {
            let v = r.get(p, i);
            d -= v * v;
        }
        if !(d > T::zero()) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite {
                row: i,
                pivot: d.to_f64_lossy(),
            });
        }
        let rii = d.sqrt();
        r.set(i, i, rii);
        let jmax = (i + bandwidth).min(n.saturating_sub(1));
        for j in i + 1..=jmax {
            let mut s = k.get(i, j);
            // rows p contributing to both columns i and j
            for p in j.saturating_sub(bandwidth).max(top)..i {
                s -= r.get(p, i) * r.get(p, j);
            }
            r.set(i, j, s / rii);
        }
    }
    Ok(r)
}

/// Dense Cholesky `K = RᵀR`, returned as a full upper band.
pub fn dense_cholesky<T: Real>(k: &DenseMatrix<T>) -> Result<BandMatrix<T>> {
    check_len("dense_cholesky: square matrix", k.rows(), k.cols())?;
    let n = k.rows();
    banded_cholesky(&SparseMatrix::from_dense(k), n.saturating_sub(1))
}
