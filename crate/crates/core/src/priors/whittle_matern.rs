use crate::error::{Error, Result};
use crate::operators::SparseMatrix;
use crate::priors::{banded_cholesky, GaussianPrior};
use crate::Real;

/// Prefactor convention for the 1D Dirichlet Laplacian `D = s · tridiag(1, -2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaplacianScaling {
    /// `s = 1/n²`
    #[default]
    Paper,
    /// `s = n²`, the finite-difference `1/h²` on the unit square
    Standard,
    /// `s = 1`, unit pixel spacing (λ then measures correlation length in pixels)
    Pixel,
}

impl LaplacianScaling {
    pub fn prefactor(self, n: usize) -> f64 {
        let n2 = (n * n) as f64;
        match self {
            LaplacianScaling::Paper => 1.0 / n2,
            LaplacianScaling::Standard => n2,
            LaplacianScaling::Pixel => 1.0,
        }
    }
}

/// Whittle–Matérn precision `K = -Iₙ⊗D - D⊗Iₙ + λ⁻² I_N` on an `n×n` pixel grid.
///
/// Pixels are ordered lexicographically, `p = row·n + col`.
#[derive(Debug, Clone)]
pub struct WhittleMaternPrecision2D<T: Real> {
    pub n: usize,
    pub lambda: f64,
    pub scaling: LaplacianScaling,
    pub k: SparseMatrix<T>,
}

impl<T: Real> WhittleMaternPrecision2D<T> {
    /// Assembles `K`. `n = 1` is accepted as a degenerate case.
    pub fn new(n: usize, lambda: f64, scaling: LaplacianScaling) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("grid side must be positive".into()));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "correlation length must be positive, got {lambda}"
            )));
        }
        let s = T::lit(scaling.prefactor(n));
        let shift = T::lit(1.0 / (lambda * lambda));
        let big_n = n * n;
        let mut rows = Vec::with_capacity(big_n);
        for r in 0..n {
            for c in 0..n {
                let mut row = Vec::with_capacity(5);
                if r > 0 {
                    row.push(((r - 1) * n + c, -s));
                }
                if c > 0 {
                    row.push((r * n + c - 1, -s));
                }
                row.push((r * n + c, T::lit(4.0) * s + shift));
                if c + 1 < n {
                    row.push((r * n + c + 1, -s));
                }
                if r + 1 < n {
                    row.push(((r + 1) * n + c, -s));
                }
                rows.push(row);
            }
        }
        Ok(Self {
            n,
            lambda,
            scaling,
            k: SparseMatrix::from_rows(big_n, rows)?,
        })
    }

    /// Half-bandwidth of `K` under lexicographic ordering.
    pub fn bandwidth(&self) -> usize {
        if self.n > 1 {
            self.n
        } else {
            0
        }
    }

    pub fn prior(&self) -> Result<GaussianPrior<T>> {
        GaussianPrior::from_factor(banded_cholesky(&self.k, self.bandwidth())?)
    }
}

/// Whittle–Matérn prior with `B = R`, the band Cholesky factor of `K`.
pub fn build_whittle_matern_prior<T: Real>(
    n: usize,
    lambda: f64,
    scaling: LaplacianScaling,
) -> Result<(WhittleMaternPrecision2D<T>, GaussianPrior<T>)> {
    let wm = WhittleMaternPrecision2D::new(n, lambda, scaling)?;
    let prior = wm.prior()?;
    Ok((wm, prior))
}
