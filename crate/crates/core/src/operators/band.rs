use crate::error::{check_len, Error, Result};
use crate::operators::{DenseMatrix, LinearOperator};
use crate::Real;

/// Square band matrix with `kl` sub- and `ku` superdiagonals, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<T>,
}

impl<T: Real> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![T::zero(); n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut b = Self::zeros(n, 0, 0);
        b.data.iter_mut().for_each(|v| *v = T::one());
        b
    }

    /// Captures the band of a dense square matrix; entries outside the band must be zero.
    pub fn from_dense(m: &DenseMatrix<T>, kl: usize, ku: usize) -> Result<Self> {
        check_len("BandMatrix::from_dense", m.rows(), m.cols())?;
        let n = m.rows();
        let mut b = Self::zeros(n, kl, ku);
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)];
                if b.in_band(i, j) {
                    b.set(i, j, v);
                } else if v != T::zero() {
                    return Err(Error::OutsideBand {
                        row: i,
                        col: j,
                        bandwidth: kl.max(ku),
                    });
                }
            }
        }
        Ok(b)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    #[inline]
    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.data[i * self.width() + j + self.kl - i]
        } else {
            T::zero()
        }
    }

    /// Panics when `(i, j)` is outside the band.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(self.in_band(i, j), "({i},{j}) outside band");
        let w = self.width();
        self.data[i * w + j + self.kl - i] = v;
    }

    /// Column range of row `i` inside the band.
    #[inline]
    fn row_span(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.kl)..=(i + self.ku).min(self.n - 1)
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        DenseMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn scaled(&self, s: T) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// LU factorization without pivoting; `L` keeps bandwidth `kl` and `U` bandwidth `ku`.
    ///
    /// Intended for diagonally dominant or triangular factors, where pivoting is unnecessary.
    pub fn lu(&self) -> Result<BandLu<T>> {
        let n = self.n;
        let mut a = self.clone();
        let tiny = self.max_abs() * T::epsilon() * T::lit(1e-3);
        for k in 0..n {
            let piv = a.get(k, k);
            if !piv.is_finite() || piv.abs() <= tiny || piv == T::zero() {
                return Err(Error::SingularFactor { row: k });
            }
            let imax = (k + self.kl).min(n - 1);
            let jmax = (k + self.ku).min(n - 1);
            for i in k + 1..=imax {
                let l = a.get(i, k) / piv;
                a.set(i, k, l);
                if l == T::zero() {
                    continue;
                }
                for j in k + 1..=jmax {
                    let v = a.get(i, j) - l * a.get(k, j);
                    a.set(i, j, v);
                }
            }
        }
        Ok(BandLu { lu: a })
    }
}

impl<T: Real> LinearOperator<T> for BandMatrix<T> {
    fn nrows(&self) -> usize {
        self.n
    }

    fn ncols(&self) -> usize {
        self.n
    }

    fn apply_into(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row_span(i).map(|j| self.get(i, j) * x[j]).sum();
        }
    }

    fn apply_adjoint_into(&self, u: &[T], y: &mut [T]) {
        y.iter_mut().for_each(|v| *v = T::zero());
        for (i, &ui) in u.iter().enumerate() {
            for j in self.row_span(i) {
                y[j] += self.get(i, j) * ui;
            }
        }
    }
}

/// Packed band LU factors: unit lower `L` below the diagonal, `U` on and above.
#[derive(Debug, Clone, PartialEq)]
pub struct BandLu<T> {
    lu: BandMatrix<T>,
}

impl<T: Real> BandLu<T> {
    pub fn dim(&self) -> usize {
        self.lu.n
    }

    /// Solves `B x = y` in place.
    pub fn solve_in_place(&self, x: &mut [T]) {
        let (n, kl, ku) = (self.lu.n, self.lu.kl, self.lu.ku);
        for i in 0..n {
            let mut s = x[i];
            for j in i.saturating_sub(kl)..i {
                s -= self.lu.get(i, j) * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + ku).min(n - 1) {
                s -= self.lu.get(i, j) * x[j];
            }
            x[i] = s / self.lu.get(i, i);
        }
    }

    /// Solves `Bᵀ x = y` in place.
    pub fn solve_transpose_in_place(&self, x: &mut [T]) {
        let (n, kl, ku) = (self.lu.n, self.lu.kl, self.lu.ku);
        for i in 0..n {
            let mut s = x[i];
            for j in i.saturating_sub(ku)..i {
                s -= self.lu.get(j, i) * x[j];
            }
            x[i] = s / self.lu.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + kl).min(n - 1) {
                s -= self.lu.get(j, i) * x[j];
            }
            x[i] = s;
        }
    }
}
