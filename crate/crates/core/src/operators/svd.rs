//! Dense factorizations: Householder QR, one-sided Jacobi SVD, symmetric eigensolvers.
//!
//! The SVD first reduces the tall orientation by Householder QR and then runs
//! one-sided (Hestenes) Jacobi on the small triangular factor.

use crate::error::{Error, Result};
use crate::operators::{vector, DenseMatrix};
use crate::Real;

const MAX_SWEEPS: usize = 80;

/// Householder QR of a tall `r×c` matrix (`r ≥ c`), reflectors kept implicit.
#[derive(Debug, Clone)]
pub struct HouseholderQr<T> {
    rows: usize,
    /// Reflector `k` acts on entries `k..rows`; stored as (v, tau) with `H = I - tau v vᵀ`.
    reflectors: Vec<(Vec<T>, T)>,
    r: DenseMatrix<T>,
}

impl<T: Real> HouseholderQr<T> {
    pub fn new(a: &DenseMatrix<T>) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        assert!(rows >= cols, "HouseholderQr expects a tall matrix");
        // column-major working copy
        let mut w: Vec<Vec<T>> = (0..cols).map(|j| a.column(j)).collect();
        let mut reflectors = Vec::with_capacity(cols);
        for k in 0..cols {
            let x = &w[k][k..];
            let alpha = vector::norm2(x);
            let mut v = x.to_vec();
            let tau;
            if alpha == T::zero() {
                tau = T::zero();
            } else {
                let sign = if v[0] >= T::zero() { T::one() } else { -T::one() };
                v[0] += sign * alpha;
                let vn2 = vector::dot(&v, &v);
                tau = T::lit(2.0) / vn2;
            }
            for col in w.iter_mut().skip(k) {
                apply_reflector(&v, tau, &mut col[k..]);
            }
            reflectors.push((v, tau));
        }
        let mut r = DenseMatrix::zeros(cols, cols);
        for (j, col) in w.iter().enumerate() {
            for i in 0..=j {
                r[(i, j)] = col[i];
            }
        }
        Self {
            rows,
            reflectors,
            r,
        }
    }

    pub fn r(&self) -> &DenseMatrix<T> {
        &self.r
    }

    /// Computes `Q x` for a full-length vector `x`.
    pub fn apply_q(&self, x: &mut [T]) {
        for (k, (v, tau)) in self.reflectors.iter().enumerate().rev() {
            apply_reflector(v, *tau, &mut x[k..]);
        }
    }

    /// Computes `Qᵀ x`.
    pub fn apply_qt(&self, x: &mut [T]) {
        for (k, (v, tau)) in self.reflectors.iter().enumerate() {
            apply_reflector(v, *tau, &mut x[k..]);
        }
    }

    /// Columns `start..end` of the full orthogonal factor `Q`.
    pub fn q_columns(&self, start: usize, end: usize) -> DenseMatrix<T> {
        let mut out = DenseMatrix::zeros(self.rows, end - start);
        let mut e = vec![T::zero(); self.rows];
        for j in start..end {
            e.iter_mut().for_each(|v| *v = T::zero());
            e[j] = T::one();
            self.apply_q(&mut e);
            out.set_column(j - start, &e);
        }
        out
    }

    /// Thin orthonormal factor (first `c` columns of `Q`).
    pub fn thin_q(&self) -> DenseMatrix<T> {
        self.q_columns(0, self.reflectors.len())
    }
}

#[inline]
fn apply_reflector<T: Real>(v: &[T], tau: T, x: &mut [T]) {
    if tau == T::zero() {
        return;
    }
    let s = tau * vector::dot(v, x);
    vector::axpy(-s, v, x);
}

/// Orthonormal basis (`n × (n-k)`) of the complement of `k` orthonormal columns.
pub fn orthogonal_complement<T: Real>(basis: &DenseMatrix<T>) -> DenseMatrix<T> {
    let (n, k) = (basis.rows(), basis.cols());
    if k == 0 {
        return DenseMatrix::identity(n);
    }
    HouseholderQr::new(basis).q_columns(k, n)
}

/// Orthonormal basis of the column span, dropping directions below `rank_tol` relative.
pub fn orthonormal_basis<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let svd = Svd::thin(m)?;
    let smax = svd.singular_values.first().copied().unwrap_or(T::zero());
    let r = svd
        .singular_values
        .iter()
        .filter(|&&s| s > smax * T::rank_tol())
        .count();
    Ok(svd.u.columns_range(0, r))
}

/// Singular value decomposition `A = U Σ Vᵀ`, singular values nonincreasing.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    /// `m×m` (full) or `m×min(m,n)` (thin).
    pub u: DenseMatrix<T>,
    pub singular_values: Vec<T>,
    /// `n×n` (full) or `n×min(m,n)` (thin).
    pub v: DenseMatrix<T>,
}

impl<T: Real> Svd<T> {
    /// Full SVD with square orthogonal `U` and `V`.
    pub fn full(a: &DenseMatrix<T>) -> Result<Self> {
        Self::compute(a, true)
    }

    /// Economy SVD keeping `min(m, n)` singular triplets.
    pub fn thin(a: &DenseMatrix<T>) -> Result<Self> {
        Self::compute(a, false)
    }

    fn compute(a: &DenseMatrix<T>, full: bool) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidArgument("SVD input has non-finite entries".into()));
        }
        if a.rows() >= a.cols() {
            let (u, s, v) = tall_svd(a, full)?;
            Ok(Self {
                u,
                singular_values: s,
                v,
            })
        } else {
            let (v, s, u) = tall_svd(&a.transpose(), full)?;
            Ok(Self {
                u,
                singular_values: s,
                v,
            })
        }
    }

    /// Number of singular values above `rank_tol · σ_max`.
    pub fn rank(&self) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(T::zero());
        self.singular_values
            .iter()
            .filter(|&&s| s > smax * T::rank_tol())
            .count()
    }

    /// `U Σ Vᵀ` reassembled (thin or full).
    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let k = self.singular_values.len();
        let us = DenseMatrix::from_fn(self.u.rows(), k, |i, j| {
            self.u[(i, j)] * self.singular_values[j]
        });
        let vk = self.v.columns_range(0, k);
        us.matmul(&vk.transpose()).expect("conforming factors")
    }
}

/// SVD of a tall `r×c` matrix: returns `(U, σ, V)` with `U` `r×r` when `full`, else `r×c`.
fn tall_svd<T: Real>(
    w: &DenseMatrix<T>,
    full: bool,
) -> Result<(DenseMatrix<T>, Vec<T>, DenseMatrix<T>)> {
    let (r, c) = (w.rows(), w.cols());
    let qr = HouseholderQr::new(w);
    let (ur, sigma, v) = jacobi_square(qr.r(), r, c)?;
    let ncols = if full { r } else { c };
    let mut u = DenseMatrix::zeros(r, ncols);
    let mut buf = vec![T::zero(); r];
    for j in 0..c {
        buf.iter_mut().for_each(|x| *x = T::zero());
        for i in 0..c {
            buf[i] = ur[(i, j)];
        }
        qr.apply_q(&mut buf);
        u.set_column(j, &buf);
    }
    if full && r > c {
        let rest = qr.q_columns(c, r);
        for j in 0..r - c {
            u.set_column(c + j, &rest.column(j));
        }
    }
    Ok((u, sigma, v))
}

/// One-sided Jacobi on a square `c×c` matrix `R`: `R = Ũ Σ Vᵀ`, sorted nonincreasing.
fn jacobi_square<T: Real>(
    rmat: &DenseMatrix<T>,
    orig_rows: usize,
    orig_cols: usize,
) -> Result<(DenseMatrix<T>, Vec<T>, DenseMatrix<T>)> {
    let c = rmat.cols();
    let mut w: Vec<Vec<T>> = (0..c).map(|j| rmat.column(j)).collect();
    let mut v: Vec<Vec<T>> = (0..c)
        .map(|j| {
            let mut e = vec![T::zero(); c];
            e[j] = T::one();
            e
        })
        .collect();
    let tol = T::epsilon() * T::lit(4.0);
    // columns at roundoff level are numerically zero and cannot be orthogonalized further
    let fro2: T = w.iter().map(|col| vector::dot(col, col)).sum();
    let negligible = fro2 * T::epsilon() * T::epsilon();
    let mut converged = c < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..c {
            for q in p + 1..c {
                let alpha = vector::dot(&w[p], &w[p]);
                let beta = vector::dot(&w[q], &w[q]);
                let gamma = vector::dot(&w[p], &w[q]);
                if gamma == T::zero()
                    || gamma.abs() <= tol * (alpha * beta).sqrt()
                    || alpha.min(beta) <= negligible
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut w, p, q, cs, sn);
                rotate(&mut v, p, q, cs, sn);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "one-sided Jacobi SVD",
            rows: orig_rows,
            cols: orig_cols,
            iterations: MAX_SWEEPS,
        });
    }

    let mut sigma: Vec<T> = w.iter().map(|col| vector::norm2(col)).collect();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&a, &b| sigma[b].partial_cmp(&sigma[a]).unwrap_or(std::cmp::Ordering::Equal));
    sigma = order.iter().map(|&j| sigma[j]).collect();
    let smax = sigma.first().copied().unwrap_or(T::zero());
    let floor = (smax * T::epsilon() * T::epsilon()).max(negligible.sqrt());

    let mut u = DenseMatrix::zeros(c, c);
    let mut vm = DenseMatrix::zeros(c, c);
    let mut nonzero = 0;
    for (k, &j) in order.iter().enumerate() {
        vm.set_column(k, &v[j]);
        if sigma[k] > floor && sigma[k] > T::zero() {
            let col: Vec<T> = w[j].iter().map(|&x| x / sigma[k]).collect();
            u.set_column(k, &col);
            nonzero += 1;
        }
    }
    if nonzero < c {
        let comp = orthogonal_complement(&u.columns_range(0, nonzero));
        for j in nonzero..c {
            u.set_column(j, &comp.column(j - nonzero));
            sigma[j] = T::zero();
        }
    }
    Ok((u, sigma, vm))
}

#[inline]
fn rotate<T: Real>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (left, right) = cols.split_at_mut(q);
    let (wp, wq) = (&mut left[p], &mut right[0]);
    for (a, b) in wp.iter_mut().zip(wq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`,
/// in nondecreasing order, by Sturm-sequence bisection.
pub fn tridiagonal_eigenvalues<T: Real>(d: &[T], e: &[T]) -> Vec<T> {
    let n = d.len();
    if n == 0 {
        return Vec::new();
    }
    assert_eq!(e.len() + 1, n, "off-diagonal must have n-1 entries");
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { T::zero() }
            + if i + 1 < n { e[i].abs() } else { T::zero() };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let span = (hi - lo).max(hi.abs().max(lo.abs())).max(T::min_positive_value());
    lo -= span * T::epsilon() * T::lit(4.0);
    hi += span * T::epsilon() * T::lit(4.0);
    let e2: Vec<T> = e.iter().map(|&x| x * x).collect();
    let pivmin = T::min_positive_value() * span.max(T::one());

    // number of eigenvalues strictly below x
    let count_below = |x: T| -> usize {
        let mut count = 0;
        let mut q = d[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < T::zero() {
            count += 1;
        }
        for i in 1..n {
            q = d[i] - x - e2[i - 1] / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    };

    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = T::lit(0.5) * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if count_below(mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
                if b - a <= T::epsilon() * T::lit(2.0) * a.abs().max(b.abs()) {
                    break;
                }
            }
            T::lit(0.5) * (a + b)
        })
        .collect()
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
///
/// Returns eigenvalues in nondecreasing order and the matching eigenvectors as columns.
pub fn symmetric_eigen<T: Real>(m: &DenseMatrix<T>) -> Result<(Vec<T>, DenseMatrix<T>)> {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = DenseMatrix::identity(n);
    let scale = a.frobenius_norm();
    let mut converged = n < 2 || scale == T::zero();
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off.sqrt() <= T::epsilon() * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (T::one() + theta * theta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "symmetric Jacobi eigensolver",
            rows: n,
            cols: n,
            iterations: MAX_SWEEPS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vecs = DenseMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok((values, vecs))
}
