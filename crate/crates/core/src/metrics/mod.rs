//! Image-quality and error measures.

mod ssim;

pub use ssim::{ssim, DynamicRange, SsimParams, SsimResult};

use crate::error::{check_len, Error, Result};
use crate::operators::vector;
use crate::Real;

/// `‖x − truth‖ / ‖truth‖`
pub fn relative_error<T: Real>(x: &[T], truth: &[T]) -> Result<T> {
    check_len("relative_error", truth.len(), x.len())?;
    let nt = vector::norm2(truth);
    if nt == T::zero() {
        return Err(Error::ZeroVector("relative_error: truth"));
    }
    Ok(vector::norm2(&vector::sub(x, truth)) / nt)
}
