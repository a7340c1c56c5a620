use crate::error::{check_len, Error, Result};
use crate::Real;

/// Piecewise-constant density on the `n × n` pixel grid, row-major with row 0 at the top.
#[derive(Debug, Clone, PartialEq)]
pub struct Phantom<T: Real> {
    side: usize,
    pixels: Vec<T>,
}

impl<T: Real> Phantom<T> {
    pub fn new(side: usize, pixels: Vec<T>) -> Result<Self> {
        check_len("phantom pixels", side * side, pixels.len())?;
        if let Some(p) = pixels.iter().position(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "phantom pixel {p} is negative or not finite"
            )));
        }
        Ok(Self { side, pixels })
    }

    pub fn zeros(side: usize) -> Self {
        Self {
            side,
            pixels: vec![T::zero(); side * side],
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn pixels(&self) -> &[T] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<T> {
        self.pixels
    }

    /// Whether every nonzero pixel center lies in the disc of radius ½.
    pub fn supported_in_disc(&self) -> bool {
        let h = 1.0 / self.side as f64;
        self.pixels.iter().enumerate().all(|(p, v)| {
            let (r, c) = (p / self.side, p % self.side);
            let y1 = -0.5 + (c as f64 + 0.5) * h;
            let y2 = 0.5 - (r as f64 + 0.5) * h;
            *v == T::zero() || y1 * y1 + y2 * y2 <= 0.25
        })
    }

    /// Uniform disc of radius `radius` centered in the domain.
    pub fn disc(side: usize, radius: f64, value: f64) -> Self {
        Self::from_density(side, |y1, y2| if y1 * y1 + y2 * y2 <= radius * radius { value } else { 0.0 })
    }

    /// A disc with an elliptic inclusion, a hollow and three bars.
    pub fn synthetic(side: usize) -> Self {
        Self::from_density(side, |y1, y2| {
            let r2 = y1 * y1 + y2 * y2;
            if r2 > 0.42 * 0.42 {
                return 0.0;
            }
            let mut v = 0.3;
            let e = ((y1 + 0.12) / 0.16).powi(2) + ((y2 - 0.14) / 0.09).powi(2);
            if e <= 1.0 {
                v = 0.8;
            }
            if (y1 - 0.16).powi(2) + (y2 - 0.12).powi(2) <= 0.07 * 0.07 {
                v = 0.0;
            }
            for k in 0..3 {
                let x0 = -0.16 + 0.12 * k as f64;
                if (y1 - x0).abs() <= 0.025 && (-0.3..=-0.06).contains(&y2) {
                    v = 1.0;
                }
            }
            v
        })
    }

    fn from_density(side: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let h = 1.0 / side as f64;
        let pixels = (0..side * side)
            .map(|p| {
                let (r, c) = (p / side, p % side);
                T::lit(f(-0.5 + (c as f64 + 0.5) * h, 0.5 - (r as f64 + 0.5) * h))
            })
            .collect();
        Self { side, pixels }
    }
}
