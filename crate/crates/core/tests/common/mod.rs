#![allow(dead_code)]

use nalgebra::DMatrix;
use priorkryl::operators::DenseMatrix;
use priorkryl::priors::GaussianPrior;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }

    pub fn index(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        lo + (self.0.next_u64() % (hi_inclusive - lo + 1) as u64) as usize
    }

    pub fn vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.uniform(-1.0, 1.0)).collect()
    }

    pub fn matrix(&mut self, m: usize, n: usize) -> DenseMatrix<f64> {
        DenseMatrix::from_fn(m, n, |_, _| self.uniform(-1.0, 1.0))
    }

    /// Random SPD precision `GᵀG + I/2`.
    pub fn precision(&mut self, n: usize) -> DenseMatrix<f64> {
        let g = self.matrix(n, n);
        let mut p = g.tr_matmul(&g).unwrap();
        for i in 0..n {
            p[(i, i)] += 0.5;
        }
        p
    }

    pub fn prior(&mut self, n: usize) -> GaussianPrior<f64> {
        GaussianPrior::from_precision_dense(&self.precision(n)).unwrap()
    }
}

pub fn to_na(a: &DenseMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

pub fn na_vec(v: &nalgebra::DVector<f64>) -> Vec<f64> {
    v.iter().copied().collect()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&d) / norm(b).max(f64::MIN_POSITIVE)
}

/// Pseudoinverse solution through nalgebra's SVD.
pub fn pinv_solution(a: &DenseMatrix<f64>, b: &[f64]) -> Vec<f64> {
    let svd = to_na(a).svd(true, true);
    let x = svd
        .solve(&nalgebra::DVector::from_column_slice(b), 1e-12 * svd.singular_values.max())
        .unwrap();
    na_vec(&x)
}

pub const FIXTURE_KAPPA: f64 = 45.0;

pub struct Example1 {
    pub model: priorkryl::solvers::ObservationModel<f64, DenseMatrix<f64>>,
    pub prior: GaussianPrior<f64>,
    pub truth: Vec<f64>,
}

/// n=150, m=6, σ=5e-5 deconvolution with the calibrated second-order prior.
pub fn example1(seed: u64) -> Example1 {
    use priorkryl::priors::{build_second_order_prior, AlphaChoice};
    use priorkryl::problems::{build_deconv_problem, DeconvSpec};
    let spec = DeconvSpec {
        kappa: FIXTURE_KAPPA,
        seed,
        ..DeconvSpec::default()
    };
    let (problem, model) = build_deconv_problem::<f64>(&spec).unwrap();
    let (_, prior) = build_second_order_prior(spec.n, 1.0, AlphaChoice::Auto).unwrap();
    Example1 {
        model,
        prior,
        truth: problem.truth,
    }
}

/// Consistent system `b = A x₀` with `σ` so small that the discrepancy test never fires.
pub fn consistent_system(rng: &mut Rng, m: usize, n: usize) -> priorkryl::solvers::ObservationModel<f64, DenseMatrix<f64>> {
    use priorkryl::LinearOperator;
    let a = rng.matrix(m, n);
    let x0 = rng.vector(n);
    let b = a.apply(&x0).unwrap();
    priorkryl::solvers::ObservationModel::new(a, b, 1e-300).unwrap()
}

pub fn exact_opts() -> priorkryl::SolveOptions {
    priorkryl::SolveOptions {
        tau: 1.0,
        max_iter: 200,
        record_basis: true,
        record_iterates: true,
    }
}

/// `C Aᵀ (A C Aᵀ)⁻¹ b` by dense nalgebra algebra.
pub fn weighted_min_norm(a: &DenseMatrix<f64>, prior: &GaussianPrior<f64>, b: &[f64]) -> Vec<f64> {
    let c = to_na(&prior.dense_covariance());
    let a = to_na(a);
    let cat = &c * a.transpose();
    let gram = &a * &cat;
    let y = gram.lu().solve(&nalgebra::DVector::from_column_slice(b)).unwrap();
    na_vec(&(cat * y))
}
