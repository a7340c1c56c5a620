use std::ops::{Index, IndexMut};

use crate::error::{check_len, Error, Result};
use crate::operators::{vector, LinearOperator};
use crate::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries; all entries must be finite.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        check_len("DenseMatrix::from_row_major", rows * cols, data.len())?;
        if !vector::all_finite(&data) {
            return Err(Error::InvalidArgument(
                "dense matrix entries must be finite".into(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_len("DenseMatrix::from_rows", c, row.len())?;
            data.extend_from_slice(row);
        }
        Self::from_row_major(r, c, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, cols: &[Vec<T>]) -> Result<Self> {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            check_len("DenseMatrix::from_columns", nrows, c.len())?;
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[T]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns_range(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| self[(i, start + j)])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_len("DenseMatrix::matmul", self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == T::zero() {
                    continue;
                }
                vector::axpy(a, other.row(k), orow);
            }
        }
        Ok(out)
    }

    /// `selfᵀ · other` without forming the transpose.
    pub fn tr_matmul(&self, other: &Self) -> Result<Self> {
        check_len("DenseMatrix::tr_matmul", self.rows, other.rows)?;
        let mut out = Self::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let srow = self.row(k);
            let orow = other.row(k);
            for (i, &a) in srow.iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                vector::axpy(a, orow, &mut out.data[i * other.cols..(i + 1) * other.cols]);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_len("DenseMatrix::sub rows", self.rows, other.rows)?;
        check_len("DenseMatrix::sub cols", self.cols, other.cols)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: vector::sub(&self.data, &other.data),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_len("DenseMatrix::add rows", self.rows, other.rows)?;
        check_len("DenseMatrix::add cols", self.cols, other.cols)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> T {
        vector::norm2(&self.data)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        vector::all_finite(&self.data)
    }

    /// Applies a column-vector operator to every column: returns `[f(c_0) … f(c_k)]`.
    pub fn map_columns(
        &self,
        out_rows: usize,
        mut f: impl FnMut(&[T]) -> Result<Vec<T>>,
    ) -> Result<Self> {
        let mut out = Self::zeros(out_rows, self.cols);
        for j in 0..self.cols {
            let c = f(&self.column(j))?;
            check_len("DenseMatrix::map_columns", out_rows, c.len())?;
            out.set_column(j, &c);
        }
        Ok(out)
    }

    /// Dense realization of any linear operator (column by column).
    pub fn from_operator<O: LinearOperator<T> + ?Sized>(op: &O) -> Self {
        let (m, n) = (op.nrows(), op.ncols());
        let mut out = Self::zeros(m, n);
        let mut e = vec![T::zero(); n];
        let mut col = vec![T::zero(); m];
        for j in 0..n {
            e[j] = T::one();
            op.apply_into(&e, &mut col);
            out.set_column(j, &col);
            e[j] = T::zero();
        }
        out
    }

    pub fn cast<U: Real>(&self) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| U::lit(v.to_f64_lossy())).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> LinearOperator<T> for DenseMatrix<T> {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply_into(&self, x: &[T], y: &mut [T]) {
        for (yi, row) in y.iter_mut().zip(self.data.chunks_exact(self.cols.max(1))) {
            *yi = vector::dot(row, x);
        }
        if self.cols == 0 {
            y.iter_mut().for_each(|v| *v = T::zero());
        }
    }

    fn apply_adjoint_into(&self, u: &[T], y: &mut [T]) {
        y.iter_mut().for_each(|v| *v = T::zero());
        for (i, &ui) in u.iter().enumerate() {
            if ui != T::zero() {
                vector::axpy(ui, self.row(i), y);
            }
        }
    }
}

/// Solves `M x = rhs` for square `M` by Gaussian elimination with partial pivoting.
pub fn lu_solve<T: Real>(m: &DenseMatrix<T>, rhs: &[T]) -> Result<Vec<T>> {
    let n = m.rows();
    check_len("lu_solve cols", n, m.cols())?;
    check_len("lu_solve rhs", n, rhs.len())?;
    let mut a = m.clone();
    let mut x = rhs.to_vec();
    let scale = a.max_abs();
    for k in 0..n {
        let (p, pv) = (k..n)
            .map(|i| (i, a[(i, k)].abs()))
            .fold((k, T::zero()), |best, c| if c.1 > best.1 { c } else { best });
        if pv <= scale * T::epsilon() * T::lit(n as f64) || pv == T::zero() {
            return Err(Error::SingularFactor { row: k });
        }
        if p != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = tmp;
            }
            x.swap(k, p);
        }
        let piv = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f == T::zero() {
                continue;
            }
            for j in k..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
            let xk = x[k];
            x[i] -= f * xk;
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in k + 1..n {
            s -= a[(k, j)] * x[j];
        }
        x[k] = s / a[(k, k)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_and_transpose_agree() {
        let a = DenseMatrix::from_fn(3, 4, |i, j| (i * 4 + j) as f64 - 5.0);
        let b = DenseMatrix::from_fn(3, 2, |i, j| (i + 2 * j) as f64);
        let c1 = a.tr_matmul(&b).unwrap();
        let c2 = a.transpose().matmul(&b).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn lu_solves_permuted_system() {
        let m = DenseMatrix::<f64>::from_rows(&[vec![0.0, 2.0], vec![3.0, 1.0]]).unwrap();
        let x = lu_solve(&m, &[4.0, 5.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lu_rejects_singular() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(lu_solve(&m, &[1.0, 1.0]), Err(Error::SingularFactor { .. })));
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(DenseMatrix::from_row_major(1, 2, vec![1.0, f64::NAN]).is_err());
    }
}
