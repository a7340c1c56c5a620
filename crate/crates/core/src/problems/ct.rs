use std::f64::consts::PI;

use super::phantom::Phantom;
use crate::error::{check_len, Error, Result};
use crate::operators::{DenseMatrix, LinearOperator, SparseMatrix};
use crate::solvers::{add_noise, ObservationModel};
use crate::Real;

/// Parallel-beam geometry over `Ω = [−½, ½]²` discretized into `n × n` pixels.
///
/// Beam `j·n_s + k` is the line `y₁ cos θ_j + y₂ sin θ_j = s_k` with
/// `θ_j = −π/2 + jπ/n_θ` and `s_k = −½ + k/(n_s − 1)`. Pixel `(r, c)` has index `r·n + c`,
/// row 0 at the top edge `y₂ = ½` and column 0 at the left edge `y₁ = −½`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CtGeometry {
    pub n: usize,
    pub n_theta: usize,
    pub n_s: usize,
}

impl CtGeometry {
    pub fn new(n: usize, n_theta: usize, n_s: usize) -> Result<Self> {
        if n == 0 || n_theta == 0 || n_s < 2 {
            return Err(Error::InvalidArgument(format!(
                "CT geometry needs n ≥ 1, n_theta ≥ 1, n_s ≥ 2; got {n}, {n_theta}, {n_s}"
            )));
        }
        Ok(Self { n, n_theta, n_s })
    }

    /// 160 × 160 pixels, 20 angles, 60 offsets.
    pub fn full() -> Self {
        Self {
            n: 160,
            n_theta: 20,
            n_s: 60,
        }
    }

    pub fn pixels(&self) -> usize {
        self.n * self.n
    }

    pub fn beams(&self) -> usize {
        self.n_theta * self.n_s
    }

    pub fn angle(&self, j: usize) -> f64 {
        -PI / 2.0 + j as f64 * PI / self.n_theta as f64
    }

    pub fn offset(&self, k: usize) -> f64 {
        -0.5 + k as f64 / (self.n_s - 1) as f64
    }

    /// `(θ, s)` of a beam.
    pub fn beam(&self, index: usize) -> (f64, f64) {
        (self.angle(index / self.n_s), self.offset(index % self.n_s))
    }

    /// Center of pixel `p` as `(y₁, y₂)`.
    pub fn pixel_center(&self, p: usize) -> (f64, f64) {
        let h = 1.0 / self.n as f64;
        let (r, c) = (p / self.n, p % self.n);
        (-0.5 + (c as f64 + 0.5) * h, 0.5 - (r as f64 + 0.5) * h)
    }
}

/// Matrix entry convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CtEntryScale {
    /// Lengths divided by the pixel count `N`.
    #[default]
    Paper,
    /// Raw lengths.
    Geometric,
}

impl CtEntryScale {
    pub fn factor(self, geom: &CtGeometry) -> f64 {
        match self {
            Self::Paper => 1.0 / geom.pixels() as f64,
            Self::Geometric => 1.0,
        }
    }
}

fn unit_trig(theta: f64) -> (f64, f64) {
    let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    (snap(theta.cos()), snap(theta.sin()))
}

/// Parameter interval of `p + t·d` inside the closed square `[−½, ½]²`.
fn clip(p: (f64, f64), d: (f64, f64)) -> Option<(f64, f64)> {
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for (pi, di) in [(p.0, d.0), (p.1, d.1)] {
        if di == 0.0 {
            if pi.abs() > 0.5 {
                return None;
            }
        } else {
            let (a, b) = ((-0.5 - pi) / di, (0.5 - pi) / di);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
    }
    (t1 > t0).then_some((t0, t1))
}

/// Intersection lengths `|ℓ ∩ Ω_j|` for one beam, as `(pixel, length)` sorted by pixel.
///
/// The chord is split at every grid-line crossing; each piece is attributed to the pixel
/// containing its midpoint.
pub fn beam_pixel_intersections(geom: &CtGeometry, beam: usize) -> Result<Vec<(usize, f64)>> {
    if beam >= geom.beams() {
        return Err(Error::InvalidArgument(format!(
            "beam {beam} out of range for {} beams",
            geom.beams()
        )));
    }
    let (theta, s) = geom.beam(beam);
    let (c, sn) = unit_trig(theta);
    let p = (s * c, s * sn);
    let d = (-sn, c);
    let Some((t0, t1)) = clip(p, d) else {
        return Ok(Vec::new());
    };
    let n = geom.n;
    let h = 1.0 / n as f64;
    let mut ts = vec![t0, t1];
    for (pi, di) in [(p.0, d.0), (p.1, d.1)] {
        if di != 0.0 {
            for i in 1..n {
                let t = (-0.5 + i as f64 * h - pi) / di;
                if t > t0 && t < t1 {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    let mut row: Vec<(usize, f64)> = Vec::with_capacity(ts.len());
    let cell = |v: f64| (((v + 0.5) * n as f64).floor().max(0.0) as usize).min(n - 1);
    for w in ts.windows(2) {
        let len = w[1] - w[0];
        if len <= 0.0 {
            continue;
        }
        let tm = 0.5 * (w[0] + w[1]);
        let (y1, y2) = (p.0 + tm * d.0, p.1 + tm * d.1);
        let pix = cell(-y2) * n + cell(y1);
        row.push((pix, len));
    }
    row.sort_by_key(|e| e.0);
    row.dedup_by(|later, earlier| {
        if later.0 == earlier.0 {
            earlier.1 += later.1;
            true
        } else {
            false
        }
    });
    Ok(row)
}

/// Length of the chord of the closed square cut by the beam's line.
pub fn chord_length(geom: &CtGeometry, beam: usize) -> f64 {
    let (theta, s) = geom.beam(beam);
    let (c, sn) = unit_trig(theta);
    clip((s * c, s * sn), (-sn, c)).map_or(0.0, |(a, b)| b - a)
}

/// The `n_θ n_s × n²` line-integral matrix.
pub fn build_ct_matrix<T: Real>(geom: &CtGeometry, scale: CtEntryScale) -> Result<SparseMatrix<T>> {
    let f = scale.factor(geom);
    let rows = (0..geom.beams())
        .map(|b| {
            beam_pixel_intersections(geom, b)
                .map(|r| r.into_iter().map(|(j, l)| (j, T::lit(l * f))).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    SparseMatrix::from_rows(geom.pixels(), rows)
}

/// Data for a CT experiment.
#[derive(Debug, Clone)]
pub struct Sinogram<T: Real> {
    pub clean: Vec<T>,
    pub model: ObservationModel<T, SparseMatrix<T>>,
}

/// `b = A·vec(phantom) + σ z`.
pub fn synthesize_sinogram<T: Real>(
    phantom: &Phantom<T>,
    geom: &CtGeometry,
    matrix: SparseMatrix<T>,
    sigma: T,
    seed: u64,
) -> Result<Sinogram<T>> {
    check_len("phantom side", geom.n, phantom.side())?;
    check_len("CT matrix columns", geom.pixels(), matrix.ncols())?;
    let clean = matrix.apply(phantom.pixels())?;
    let b = add_noise(&clean, sigma, seed);
    Ok(Sinogram {
        clean,
        model: ObservationModel::new(matrix, b, sigma)?,
    })
}

/// Beam data arranged as the `n_s × n_θ` sinogram image (offset by row, angle by column).
pub fn sinogram_image<T: Real>(geom: &CtGeometry, data: &[T]) -> Result<DenseMatrix<T>> {
    check_len("sinogram data", geom.beams(), data.len())?;
    Ok(DenseMatrix::from_fn(geom.n_s, geom.n_theta, |k, j| data[j * geom.n_s + k]))
}
