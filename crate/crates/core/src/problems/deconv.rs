use super::bessel::airy_kernel;
use crate::error::{Error, Result};
use crate::operators::{DenseMatrix, LinearOperator};
use crate::solvers::{add_noise, ObservationModel};
use crate::Real;

pub const DEFAULT_N: usize = 150;
pub const DEFAULT_M: usize = 6;
/// Kernel width of the published experiment.
pub const PAPER_KAPPA: f64 = 0.02;
/// Kernel width giving localized, beam-like kernel rows.
pub const BEAMS_KAPPA: f64 = 200.0;

/// Named kernel-width presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelPreset {
    #[default]
    Paper,
    Beams,
}

impl KernelPreset {
    pub fn kappa(self) -> f64 {
        match self {
            Self::Paper => PAPER_KAPPA,
            Self::Beams => BEAMS_KAPPA,
        }
    }
}

/// Ground truth for the deconvolution problem.
#[derive(Debug, Clone, PartialEq)]
pub enum TruthSpec {
    Sigmoid { center: f64, steepness: f64 },
    Constant(f64),
    Values(Vec<f64>),
}

impl Default for TruthSpec {
    fn default() -> Self {
        Self::Sigmoid {
            center: 0.5,
            steepness: 15.0,
        }
    }
}

/// `f(s) = 1 / (1 + exp(−steepness (s − center)))` on the grid `s_j = j/n`, `j = 1..n`.
pub fn sigmoid_truth(n: usize, center: f64, steepness: f64) -> Vec<f64> {
    grid(n)
        .into_iter()
        .map(|s| 1.0 / (1.0 + (-steepness * (s - center)).exp()))
        .collect()
}

/// `s_j = j/n`, `j = 1..n`.
pub fn grid(n: usize) -> Vec<f64> {
    (1..=n).map(|j| j as f64 / n as f64).collect()
}

/// Equispaced interior points `ℓ/(m+1)`, `ℓ = 1..m`.
pub fn default_t_points(m: usize) -> Vec<f64> {
    (1..=m).map(|l| l as f64 / (m + 1) as f64).collect()
}

/// One-dimensional Airy-kernel deconvolution: `a_{ℓk} = a(t_ℓ − s_k)/n`.
#[derive(Debug, Clone)]
pub struct DeconvProblem<T: Real> {
    pub n: usize,
    pub m: usize,
    pub kappa: f64,
    pub t_points: Vec<f64>,
    pub s_points: Vec<f64>,
    pub truth: Vec<T>,
    pub matrix: DenseMatrix<T>,
    pub clean_data: Vec<T>,
}

/// Settings for [`build_deconv_problem`].
#[derive(Debug, Clone, PartialEq)]
pub struct DeconvSpec {
    pub n: usize,
    pub m: usize,
    pub kappa: f64,
    /// Defaults to [`default_t_points`].
    pub t_points: Option<Vec<f64>>,
    pub truth: TruthSpec,
    pub sigma: f64,
    pub seed: u64,
}

impl Default for DeconvSpec {
    fn default() -> Self {
        Self {
            n: DEFAULT_N,
            m: DEFAULT_M,
            kappa: PAPER_KAPPA,
            t_points: None,
            truth: TruthSpec::default(),
            sigma: 5e-5,
            seed: 0,
        }
    }
}

pub fn deconv_matrix<T: Real>(t_points: &[f64], n: usize, kappa: f64) -> DenseMatrix<T> {
    let s = grid(n);
    DenseMatrix::from_fn(t_points.len(), n, |l, k| T::lit(airy_kernel(t_points[l] - s[k], kappa) / n as f64))
}

pub fn build_deconv_problem<T: Real>(
    spec: &DeconvSpec,
) -> Result<(DeconvProblem<T>, ObservationModel<T, DenseMatrix<T>>)> {
    let DeconvSpec { n, m, kappa, .. } = *spec;
    if m == 0 || m >= n {
        return Err(Error::InvalidArgument(format!("deconvolution needs 0 < m < n, got m={m}, n={n}")));
    }
    if !(kappa > 0.0) {
        return Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")));
    }
    let t_points = spec.t_points.clone().unwrap_or_else(|| default_t_points(m));
    crate::error::check_len("deconvolution observation points", m, t_points.len())?;
    if let Some(t) = t_points.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::InvalidArgument(format!("observation point {t} outside [0, 1]")));
    }
    let truth: Vec<f64> = match &spec.truth {
        TruthSpec::Sigmoid { center, steepness } => sigmoid_truth(n, *center, *steepness),
        TruthSpec::Constant(c) => vec![*c; n],
        TruthSpec::Values(v) => {
            crate::error::check_len("deconvolution truth", n, v.len())?;
            v.clone()
        }
    };
    let truth: Vec<T> = truth.into_iter().map(T::lit).collect();
    let matrix = deconv_matrix::<T>(&t_points, n, kappa);
    let clean = matrix.apply(&truth)?;
    let b = add_noise(&clean, T::lit(spec.sigma), spec.seed);
    let problem = DeconvProblem {
        n,
        m,
        kappa,
        t_points,
        s_points: grid(n),
        truth,
        matrix: matrix.clone(),
        clean_data: clean,
    };
    let model = ObservationModel::new(matrix, b, T::lit(spec.sigma))?;
    Ok((problem, model))
}
