use crate::error::{Error, Result};
use crate::operators::{DenseMatrix, Svd};
use crate::priors::GaussianPrior;
use crate::Real;

/// Generalized SVD of the pair `(A, B)`: `A = U [0 | Σ_A] X⁻¹`, `B = V diag(I, Σ_B) X⁻¹`.
#[derive(Debug, Clone)]
pub struct GsvdResult<T: Real> {
    pub u: DenseMatrix<T>,
    pub v: DenseMatrix<T>,
    pub x: DenseMatrix<T>,
    pub x_inv: DenseMatrix<T>,
    /// Nondecreasing.
    pub s_a: Vec<T>,
    /// Nonincreasing.
    pub s_b: Vec<T>,
    /// `σ̃_j = s_a / s_b`, the singular values of `A B⁻¹` in ascending order.
    pub generalized_values: Vec<T>,
}

impl<T: Real> GsvdResult<T> {
    pub fn m(&self) -> usize {
        self.u.rows()
    }

    pub fn n(&self) -> usize {
        self.v.rows()
    }

    /// First `n − m` columns of `X`, a basis of `N(A)`.
    pub fn x_prime(&self) -> DenseMatrix<T> {
        self.x.columns_range(0, self.n() - self.m())
    }

    /// Last `m` columns of `X`.
    pub fn x_dprime(&self) -> DenseMatrix<T> {
        self.x.columns_range(self.n() - self.m(), self.n())
    }

    /// `m × n` matrix `[0 | Σ_A]`.
    pub fn sigma_a_block(&self) -> DenseMatrix<T> {
        let (m, n) = (self.m(), self.n());
        DenseMatrix::from_fn(m, n, |i, j| if j == n - m + i { self.s_a[i] } else { T::zero() })
    }

    /// `diag(I_{n−m}, Σ_B)`
    pub fn sigma_b_block(&self) -> DenseMatrix<T> {
        let (m, n) = (self.m(), self.n());
        DenseMatrix::from_fn(n, n, |i, j| match i == j {
            false => T::zero(),
            true if i < n - m => T::one(),
            true => self.s_b[i - (n - m)],
        })
    }

    /// Relative Frobenius residuals of both factorizations.
    pub fn reconstruction_residuals(&self, a: &DenseMatrix<T>, prior: &GaussianPrior<T>) -> Result<(T, T)> {
        let ra = self.u.matmul(&self.sigma_a_block())?.matmul(&self.x_inv)?;
        let b = prior.dense_factor();
        let rb = self.v.matmul(&self.sigma_b_block())?.matmul(&self.x_inv)?;
        Ok((
            ra.sub(a)?.frobenius_norm() / a.frobenius_norm(),
            rb.sub(&b)?.frobenius_norm() / b.frobenius_norm(),
        ))
    }

    /// `max_j |s_a² + s_b² − 1|`
    pub fn unit_sum_defect(&self) -> T {
        self.s_a
            .iter()
            .zip(&self.s_b)
            .map(|(&a, &b)| (a * a + b * b - T::one()).abs())
            .fold(T::zero(), T::max)
    }

    /// `‖A X′‖_F / (‖A‖_F ‖X′‖_F)`
    pub fn null_block_residual(&self, a: &DenseMatrix<T>) -> Result<T> {
        let xp = self.x_prime();
        Ok(a.matmul(&xp)?.frobenius_norm() / (a.frobenius_norm() * xp.frobenius_norm()))
    }

    /// Largest off-diagonal entry of `Xᵀ C⁻¹ X` and largest entry of the cross block
    /// `X′ᵀ C⁻¹ X″`, both relative to the largest diagonal entry.
    pub fn c_gram_defects(&self, prior: &GaussianPrior<T>) -> Result<(T, T)> {
        let g = self.c_gram(prior)?;
        let n = self.n();
        let split = n - self.m();
        let diag = (0..n).map(|i| g[(i, i)].abs()).fold(T::zero(), T::max);
        let (mut off, mut cross) = (T::zero(), T::zero());
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off.max(g[(i, j)].abs());
                }
                if i < split && j >= split {
                    cross = cross.max(g[(i, j)].abs());
                }
            }
        }
        Ok((off / diag, cross / diag))
    }

    /// `Xᵀ C⁻¹ X`, computed as `(BX)ᵀ(BX)`.
    pub fn c_gram(&self, prior: &GaussianPrior<T>) -> Result<DenseMatrix<T>> {
        let bx = self.x.map_columns(self.n(), |c| prior.apply_b(c))?;
        bx.tr_matmul(&bx)
    }
}

/// Dense `Ã = A B⁻¹`; row `i` is `B⁻ᵀ aᵢ`.
pub fn priorconditioned_matrix<T: Real>(a: &DenseMatrix<T>, prior: &GaussianPrior<T>) -> Result<DenseMatrix<T>> {
    crate::error::check_len("priorconditioned matrix: prior dimension", a.cols(), prior.dim())?;
    let rows = (0..a.rows()).map(|i| prior.solve_bt(a.row(i))).collect::<Result<Vec<_>>>()?;
    DenseMatrix::from_rows(&rows)
}

/// GSVD of `(A, B)` through the full SVD of `Ã = A B⁻¹`.
pub fn gsvd<T: Real>(a: &DenseMatrix<T>, prior: &GaussianPrior<T>) -> Result<GsvdResult<T>> {
    let (m, n) = (a.rows(), a.cols());
    crate::error::check_len("gsvd: prior dimension", n, prior.dim())?;
    if m >= n {
        return Err(Error::InvalidArgument(format!("gsvd needs m < n, got {m}×{n}")));
    }
    let at = priorconditioned_matrix(a, prior)?;
    let svd = Svd::full(&at)?;
    let sv = &svd.singular_values;
    let (smax, smin) = (sv[0], sv[m - 1]);
    if !(smin > T::lit(1e-10) * smax) {
        return Err(Error::RankDeficient {
            smallest: smin.to_f64_lossy(),
            largest: smax.to_f64_lossy(),
        });
    }

    let generalized_values: Vec<T> = (0..m).map(|j| sv[m - 1 - j]).collect();
    let s_a: Vec<T> = generalized_values.iter().map(|&s| s / (T::one() + s * s).sqrt()).collect();
    let s_b: Vec<T> = generalized_values.iter().map(|&s| T::one() / (T::one() + s * s).sqrt()).collect();

    let u = DenseMatrix::from_fn(m, m, |i, j| svd.u[(i, m - 1 - j)]);
    let v = DenseMatrix::from_fn(n, n, |i, j| {
        if j < n - m {
            svd.v[(i, m + j)]
        } else {
            svd.v[(i, n - 1 - j)]
        }
    });
    let weight = |j: usize| if j < n - m { T::one() } else { s_b[j - (n - m)] };

    let mut x = DenseMatrix::zeros(n, n);
    let mut x_inv = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let vj = v.column(j);
        let mut col = prior.solve_b(&vj)?;
        col.iter_mut().for_each(|c| *c *= weight(j));
        x.set_column(j, &col);
        let row = prior.apply_bt(&vj)?;
        for (k, r) in row.into_iter().enumerate() {
            x_inv[(j, k)] = r / weight(j);
        }
    }
    Ok(GsvdResult {
        u,
        v,
        x,
        x_inv,
        s_a,
        s_b,
        generalized_values,
    })
}
