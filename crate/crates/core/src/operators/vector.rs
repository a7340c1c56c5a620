//! Small dense-vector kernels shared by the solvers and diagnostics.

use crate::Real;

#[inline]
pub fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

#[inline]
pub fn norm2<T: Real>(x: &[T]) -> T {
    // Scaled accumulation keeps tiny residuals (σ² ~ 1e-9 thresholds and below) from underflowing.
    let scale = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let ss: T = x.iter().map(|&v| (v / scale) * (v / scale)).sum();
    scale * ss.sqrt()
}

/// y += a * x
#[inline]
pub fn axpy<T: Real>(a: T, x: &[T], y: &mut [T]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[inline]
pub fn scale<T: Real>(a: T, x: &mut [T]) {
    for v in x {
        *v *= a;
    }
}

pub fn sub<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(&a, &b)| a - b).collect()
}

pub fn all_finite<T: Real>(x: &[T]) -> bool {
    x.iter().all(|v| v.is_finite())
}
