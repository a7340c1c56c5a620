use crate::error::{Error, Result};
use crate::operators::DenseMatrix;
use crate::Real;

/// How the dynamic range `L` is obtained from the original image.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DynamicRange {
    /// `max − min`
    #[default]
    MaxMinusMin,
    /// `max / min`; requires a positive minimum.
    Ratio,
    Fixed(f64),
}

/// Stabilizers are `γ₁ = k1·L`, `γ₂ = k2·L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: DynamicRange,
    /// Gaussian window standard deviation in pixels.
    pub window_std: f64,
    pub window_radius: usize,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            k1: 0.01,
            k2: 0.03,
            dynamic_range: DynamicRange::MaxMinusMin,
            window_std: 1.5,
            window_radius: 5,
        }
    }
}

impl SsimParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.window_std > 0.0) || (self.window_radius as f64) < 3.0 * self.window_std {
            return Err(Error::InvalidArgument(format!(
                "SSIM window radius {} must be at least 3 × std {}",
                self.window_radius, self.window_std
            )));
        }
        if !(self.k1 > 0.0 && self.k2 > 0.0) {
            return Err(Error::InvalidArgument("SSIM stabilizer factors must be positive".into()));
        }
        Ok(())
    }

    /// `L` for the given original image.
    pub fn range_of<T: Real>(&self, original: &DenseMatrix<T>) -> Result<f64> {
        let v = original.as_slice();
        let lo = v.iter().map(|x| x.to_f64_lossy()).fold(f64::INFINITY, f64::min);
        let hi = v.iter().map(|x| x.to_f64_lossy()).fold(f64::NEG_INFINITY, f64::max);
        let l = match self.dynamic_range {
            DynamicRange::MaxMinusMin => hi - lo,
            DynamicRange::Ratio if lo > 0.0 => hi / lo,
            DynamicRange::Ratio => {
                return Err(Error::InvalidArgument(
                    "ratio dynamic range needs a positive minimum".into(),
                ))
            }
            DynamicRange::Fixed(l) => l,
        };
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidArgument(format!("SSIM dynamic range must be positive, got {l}")));
        }
        Ok(l)
    }
}

/// Local SSIM values and their mean.
#[derive(Debug, Clone)]
pub struct SsimResult<T: Real> {
    pub mean: T,
    pub map: DenseMatrix<T>,
}

/// Structural similarity under a Gaussian window centered at every pixel; the window is
/// truncated at the image border and its weights renormalized.
pub fn ssim<T: Real>(
    original: &DenseMatrix<T>,
    reconstructed: &DenseMatrix<T>,
    params: &SsimParams,
) -> Result<SsimResult<T>> {
    params.validate()?;
    let (h, w) = (original.rows(), original.cols());
    if (reconstructed.rows(), reconstructed.cols()) != (h, w) {
        return Err(Error::DimensionMismatch {
            context: "ssim image size",
            expected: h * w,
            found: reconstructed.rows() * reconstructed.cols(),
        });
    }
    if h == 0 || w == 0 {
        return Err(Error::InvalidArgument("SSIM of an empty image".into()));
    }
    if !original.is_finite() || !reconstructed.is_finite() {
        return Err(Error::NotFinite {
            context: "ssim input",
            iteration: 0,
        });
    }
    let l = params.range_of(original)?;
    let g1 = T::lit(params.k1 * l);
    let g2 = T::lit(params.k2 * l);
    let rad = params.window_radius as isize;
    let kernel: Vec<T> = (-rad..=rad)
        .map(|d| T::lit((-(d * d) as f64 / (2.0 * params.window_std * params.window_std)).exp()))
        .collect();

    let mut map = DenseMatrix::zeros(h, w);
    let mut total = T::zero();
    for r in 0..h {
        for c in 0..w {
            let (r0, r1) = ((r as isize - rad).max(0) as usize, (r as isize + rad).min(h as isize - 1) as usize);
            let (c0, c1) = ((c as isize - rad).max(0) as usize, (c as isize + rad).min(w as isize - 1) as usize);
            let weight = |i: usize, j: usize| {
                kernel[(i as isize - r as isize + rad) as usize] * kernel[(j as isize - c as isize + rad) as usize]
            };
            let (mut ws, mut mo, mut mr) = (T::zero(), T::zero(), T::zero());
            for i in r0..=r1 {
                for j in c0..=c1 {
                    let wt = weight(i, j);
                    ws += wt;
                    mo += wt * original[(i, j)];
                    mr += wt * reconstructed[(i, j)];
                }
            }
            mo /= ws;
            mr /= ws;
            let (mut vo, mut vr, mut cv) = (T::zero(), T::zero(), T::zero());
            for i in r0..=r1 {
                for j in c0..=c1 {
                    let wt = weight(i, j) / ws;
                    let (dx, dy) = (original[(i, j)] - mo, reconstructed[(i, j)] - mr);
                    vo += wt * dx * dx;
                    vr += wt * dy * dy;
                    cv += wt * dx * dy;
                }
            }
            let two = T::lit(2.0);
            let s = (two * mo * mr + g1) * (two * cv + g2) / ((mo * mo + mr * mr + g1) * (vo + vr + g2));
            map[(r, c)] = s;
            total += s;
        }
    }
    Ok(SsimResult {
        mean: total / T::from_usize(h * w).expect("pixel count"),
        map,
    })
}
