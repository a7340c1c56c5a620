mod common;

use common::{consistent_system, example1, exact_opts, norm, rel_diff, to_na, weighted_min_norm, Rng};
use nalgebra::{DMatrix, DVector};
use priorkryl::diagnostics::{nullspace_fraction, nullspace_projector};
use priorkryl::metrics::relative_error;
use priorkryl::operators::{DenseMatrix, IdentityOperator, LinearOperator};
use priorkryl::priors::{build_second_order_prior, AlphaChoice, GaussianPrior};
use priorkryl::solvers::{
    add_noise, cgls_solve, pcgls_solve, standard_normals, tikhonov_map_direct, whiten, ObservationModel,
};
use priorkryl::{SolveOptions, StopReason};
use proptest::prelude::*;

/// Least-squares residual of `x` against the column span of `basis`, relative to `‖x‖`.
fn span_residual(basis: &DMatrix<f64>, x: &[f64]) -> f64 {
    let q = basis.clone().svd(true, false);
    let tol = 1e-12 * q.singular_values.max();
    let u = q.u.unwrap();
    let x = DVector::from_column_slice(x);
    let mut proj = DVector::zeros(x.len());
    for (j, s) in q.singular_values.iter().enumerate() {
        if *s > tol {
            let col = u.column(j);
            proj += col * col.dot(&x);
        }
    }
    (x.clone() - proj).norm() / x.norm().max(f64::MIN_POSITIVE)
}

#[test]
fn identity_system_converges_in_one_step() {
    let model = ObservationModel::new(IdentityOperator { n: 2 }, vec![1.0, 0.0], 1e-12).unwrap();
    let (x, trace) = cgls_solve(&model, &SolveOptions::default()).unwrap();
    assert_eq!(trace.iterations(), 1);
    assert!(rel_diff(&x, &[1.0, 0.0]) < 1e-15);
    assert!(trace.betas.is_empty());
}

#[test]
fn cgls_limit_is_pseudoinverse_solution() {
    let mut rng = Rng::new(21);
    for _ in 0..10 {
        let model = consistent_system(&mut rng, 3, 8);
        let (x, trace) = cgls_solve(&model, &exact_opts()).unwrap();
        assert_eq!(trace.stop_reason, StopReason::Stagnation);
        assert!(rel_diff(&x, &common::pinv_solution(&model.op, &model.b)) < 1e-8);
    }
}

#[test]
fn pcgls_limit_is_weighted_min_norm_solution() {
    let mut rng = Rng::new(22);
    for _ in 0..10 {
        let model = consistent_system(&mut rng, 4, 9);
        let prior = rng.prior(9);
        let (x, _) = pcgls_solve(&model, &prior, &exact_opts()).unwrap();
        assert!(rel_diff(&x, &weighted_min_norm(&model.op, &prior, &model.b)) < 1e-8);
    }
}

#[test]
fn identity_prior_reproduces_cgls() {
    let mut rng = Rng::new(23);
    let a = rng.matrix(5, 12);
    let b = add_noise(&a.apply(&rng.vector(12)).unwrap(), 1e-2, 4);
    let model = ObservationModel::new(a, b, 1e-2).unwrap();
    let (x1, t1) = cgls_solve(&model, &SolveOptions::default()).unwrap();
    let (x2, t2) = pcgls_solve(&model, &GaussianPrior::identity(12), &SolveOptions::default()).unwrap();
    assert_eq!(t1.iterations(), t2.iterations());
    for (a, b) in t1.iterates.iter().zip(&t2.iterates) {
        assert!(a.iter().zip(b).all(|(u, v)| (u - v).abs() <= 1e-12 * (1.0 + u.abs())));
    }
    assert!(rel_diff(&x1, &x2) < 1e-12);
}

#[test]
fn trace_conventions_and_monotone_discrepancy() {
    let mut rng = Rng::new(24);
    let model = consistent_system(&mut rng, 6, 20);
    let prior = rng.prior(20);
    for (_, trace) in [
        cgls_solve(&model, &exact_opts()).unwrap(),
        pcgls_solve(&model, &prior, &exact_opts()).unwrap(),
    ] {
        let k = trace.iterations();
        assert!(k >= 1);
        assert_eq!(trace.betas.len(), k - 1);
        assert_eq!(trace.iterates.len(), k + 1);
        assert_eq!(trace.discrepancy_norms.len(), k + 1);
        assert_eq!(trace.nres_norms.len(), k + 1);
        let basis = trace.basis.as_ref().unwrap();
        assert_eq!(basis.len(), k);
        for w in trace.discrepancy_norms.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        // vectors normalized from roundoff-level residuals carry no direction
        let live = (0..k).filter(|&j| trace.nres_norms[j] > 1e-10 * trace.nres_norms[0]).count();
        for i in 0..live {
            for j in 0..live {
                let d: f64 = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-8, "({i},{j}) {d}");
            }
        }
    }
}

#[test]
fn iterates_live_in_krylov_space() {
    let mut rng = Rng::new(25);
    let model = consistent_system(&mut rng, 5, 14);
    let a = to_na(&model.op);
    let ata = a.transpose() * &a;
    let (_, trace) = cgls_solve(&model, &exact_opts()).unwrap();
    let mut v = a.transpose() * DVector::from_column_slice(&model.b);
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for j in 1..trace.iterates.len() {
        cols.push(v.clone());
        v = &ata * v;
        let basis = DMatrix::from_columns(&cols);
        assert!(span_residual(&basis, &trace.iterates[j]) < 1e-8, "iterate {j}");
    }
}

#[test]
fn cgls_iterates_are_orthogonal_to_null_space() {
    let mut rng = Rng::new(26);
    let model = consistent_system(&mut rng, 4, 11);
    let p = nullspace_projector(&model.op).unwrap();
    let (_, trace) = cgls_solve(&model, &exact_opts()).unwrap();
    for x in &trace.iterates[1..] {
        assert!(nullspace_fraction(&p, x).unwrap() <= 1e-8);
    }
}

#[test]
fn pcgls_iterates_lie_in_c_range_of_transpose() {
    let mut rng = Rng::new(27);
    let model = consistent_system(&mut rng, 4, 11);
    let prior = rng.prior(11);
    let cat = to_na(&prior.dense_covariance()) * to_na(&model.op).transpose();
    let (_, trace) = pcgls_solve(&model, &prior, &exact_opts()).unwrap();
    for x in &trace.iterates[1..] {
        assert!(span_residual(&cat, x) <= 1e-8);
    }
}

#[test]
fn range_invariant_prior_cannot_inform_null_space() {
    let mut rng = Rng::new(28);
    let model = consistent_system(&mut rng, 3, 10);
    let v = to_na(&model.op).svd(false, true).v_t.unwrap().transpose();
    // complete the right singular vectors to an orthonormal basis of Rⁿ
    let full = {
        let mut cols: Vec<DVector<f64>> = v.column_iter().map(|c| c.into_owned()).collect();
        let mut e = 0;
        while cols.len() < 10 {
            let mut w = DVector::from_fn(10, |i, _| if i == e { 1.0 } else { 0.0 });
            for c in &cols {
                w -= c * c.dot(&w);
            }
            if w.norm() > 1e-6 {
                cols.push(w.normalize());
            }
            e += 1;
        }
        DMatrix::from_columns(&cols)
    };
    let weights = DVector::from_fn(10, |_, _| rng.uniform(0.5, 3.0));
    let cov = &full * DMatrix::from_diagonal(&weights) * full.transpose();
    let cov = DenseMatrix::from_fn(10, 10, |i, j| 0.5 * (cov[(i, j)] + cov[(j, i)]));
    let prior = GaussianPrior::from_covariance_dense(&cov).unwrap();
    let p = nullspace_projector(&model.op).unwrap();
    let (_, trace) = pcgls_solve(&model, &prior, &exact_opts()).unwrap();
    for x in &trace.iterates[1..] {
        assert!(nullspace_fraction(&p, x).unwrap() <= 1e-8);
    }
}

#[test]
fn direct_map_examples() {
    let zero = ObservationModel::new(DenseMatrix::<f64>::zeros(3, 3), vec![1.0, 2.0, 3.0], 1.0).unwrap();
    assert_eq!(tikhonov_map_direct(&zero, &GaussianPrior::identity(3)).unwrap(), vec![0.0; 3]);

    let id = ObservationModel::new(DenseMatrix::<f64>::identity(3), vec![2.0, -4.0, 6.0], 1.0).unwrap();
    let x = tikhonov_map_direct(&id, &GaussianPrior::identity(3)).unwrap();
    assert!(rel_diff(&x, &[1.0, -2.0, 3.0]) < 1e-15);
}

#[test]
fn direct_map_matches_stacked_least_squares() {
    let mut rng = Rng::new(29);
    let a = rng.matrix(4, 10);
    let b = rng.vector(4);
    let (_, prior) = build_second_order_prior::<f64>(10, 1.0, AlphaChoice::Value(0.5)).unwrap();
    let model = ObservationModel::new(a.clone(), b.clone(), 1.0).unwrap();
    let x = tikhonov_map_direct(&model, &prior).unwrap();

    let stacked = DMatrix::from_fn(14, 10, |i, j| if i < 4 { a[(i, j)] } else { prior.dense_factor()[(i - 4, j)] });
    let rhs = DVector::from_fn(14, |i, _| if i < 4 { b[i] } else { 0.0 });
    let qr = stacked.qr();
    let want = qr.r().solve_upper_triangular(&(qr.q().transpose() * rhs)).unwrap();
    assert!(rel_diff(&x, want.as_slice()) < 1e-10);
}

#[test]
fn whitening_examples() {
    let a = DenseMatrix::from_rows(&[vec![2.0, 4.0], vec![6.0, 8.0]]).unwrap();
    let unit = ObservationModel::new(a.clone(), vec![1.0, 2.0], 1.0).unwrap();
    let w = whiten(&unit);
    assert_eq!(w.b, unit.b);
    assert_eq!(DenseMatrix::from_operator(&w.op), a);

    let two = ObservationModel::new(a.clone(), vec![1.0, 2.0], 2.0).unwrap();
    let w = whiten(&two);
    assert_eq!(w.b, vec![0.5, 1.0]);
    assert_eq!(w.sigma, 1.0);
    assert_eq!(DenseMatrix::from_operator(&w.op), a.scaled(0.5));
}

#[test]
fn whitened_and_raw_runs_agree() {
    let mut rng = Rng::new(30);
    let a = rng.matrix(5, 15);
    let sigma = 3e-2;
    let b = add_noise(&a.apply(&rng.vector(15)).unwrap(), sigma, 2);
    let raw = ObservationModel::new(a, b, sigma).unwrap();
    let (_, t_raw) = cgls_solve(&raw, &SolveOptions::default()).unwrap();
    let (_, t_white) = cgls_solve(&whiten(&raw), &SolveOptions::default()).unwrap();
    assert_eq!(t_raw.iterations(), t_white.iterations());
    for (u, v) in t_raw.iterates.iter().zip(&t_white.iterates) {
        assert!(rel_diff(v, u) < 1e-12 || norm(u) == 0.0);
    }
}

#[test]
fn noise_generation() {
    let clean = vec![1.0, 2.0, 3.0];
    assert_eq!(add_noise(&clean, 0.0, 7), clean);
    assert_eq!(add_noise(&clean, 0.5, 7), add_noise(&clean, 0.5, 7));
    assert_ne!(add_noise(&clean, 0.5, 7), add_noise(&clean, 0.5, 8));
    let z = standard_normals(100_000, 1);
    let mean = z.iter().sum::<f64>() / z.len() as f64;
    let std = (z.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / z.len() as f64).sqrt();
    assert!(mean.abs() < 0.02 && (std - 1.0).abs() < 0.02, "mean {mean}, std {std}");
}

#[test]
fn invalid_inputs_are_rejected() {
    let a = DenseMatrix::<f64>::identity(2);
    assert!(ObservationModel::new(a.clone(), vec![1.0], 1.0).is_err());
    assert!(ObservationModel::new(a.clone(), vec![1.0, 1.0], 0.0).is_err());
    let model = ObservationModel::new(a, vec![1.0, f64::NAN], 1.0).unwrap();
    assert!(cgls_solve(&model, &SolveOptions::default()).is_err());
    let ok = ObservationModel::new(DenseMatrix::<f64>::identity(2), vec![1.0, 1.0], 1.0).unwrap();
    assert!(cgls_solve(&ok, &SolveOptions { tau: 0.5, ..SolveOptions::default() }).is_err());
    assert!(cgls_solve(&ok, &SolveOptions { max_iter: 0, ..SolveOptions::default() }).is_err());
    assert!(pcgls_solve(&ok, &GaussianPrior::identity(3), &SolveOptions::default()).is_err());
}

#[test]
fn max_iter_and_immediate_stop() {
    let mut rng = Rng::new(31);
    let model = consistent_system(&mut rng, 6, 20);
    let (_, trace) = cgls_solve(&model, &SolveOptions { max_iter: 2, ..exact_opts() }).unwrap();
    assert_eq!(trace.stop_reason, StopReason::MaxIter);
    assert_eq!(trace.iterations(), 2);

    let loud = ObservationModel::new(model.op.clone(), model.b.clone(), 1e3).unwrap();
    let (x, trace) = cgls_solve(&loud, &SolveOptions::default()).unwrap();
    assert_eq!(trace.iterations(), 0);
    assert_eq!(trace.stop_reason, StopReason::Discrepancy);
    assert!(x.iter().all(|&v| v == 0.0));
}

#[test]
fn example1_stopping_indices() {
    for seed in 0..3 {
        let ex = example1(seed);
        let (xc, tc) = cgls_solve(&ex.model, &SolveOptions::default()).unwrap();
        let (xp, tp) = pcgls_solve(&ex.model, &ex.prior, &SolveOptions::default()).unwrap();
        assert!(tc.iterations() <= 4, "seed {seed}: cgls {}", tc.iterations());
        assert!((5..=7).contains(&tp.iterations()), "seed {seed}: pcgls {}", tp.iterations());
        assert!(tp.iterations() > tc.iterations());
        assert!(relative_error(&xp, &ex.truth).unwrap() < relative_error(&xc, &ex.truth).unwrap());
    }
}

#[test]
fn example1_high_noise_stops_early() {
    use priorkryl::problems::{build_deconv_problem, DeconvSpec};
    let spec = DeconvSpec { kappa: common::FIXTURE_KAPPA, sigma: 1e-1, ..DeconvSpec::default() };
    let (_, model) = build_deconv_problem::<f64>(&spec).unwrap();
    let (_, prior) = build_second_order_prior(150, 1.0, AlphaChoice::Auto).unwrap();
    assert!(cgls_solve(&model, &SolveOptions::default()).unwrap().1.iterations() <= 2);
    assert!(pcgls_solve(&model, &prior, &SolveOptions::default()).unwrap().1.iterations() <= 2);
}

#[test]
fn runs_are_deterministic() {
    let ex = example1(5);
    let (a, ta) = pcgls_solve(&ex.model, &ex.prior, &SolveOptions::default()).unwrap();
    let (b, tb) = pcgls_solve(&ex.model, &ex.prior, &SolveOptions::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(ta.iterates, tb.iterates);
}

#[test]
fn single_precision_solve() {
    let a = DenseMatrix::<f32>::from_rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]).unwrap();
    let model = ObservationModel::new(a, vec![2.0f32, 1.0], 1e-20).unwrap();
    let (x, _) = cgls_solve(&model, &SolveOptions::default()).unwrap();
    assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] - 1.0).abs() < 1e-5 && (x[2] - 1.0).abs() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn min_norm_oracles_hold(seed in any::<u64>(), m in 2usize..7, n in 8usize..31) {
        let mut rng = Rng::new(seed);
        let model = consistent_system(&mut rng, m, n);
        let (x, _) = cgls_solve(&model, &exact_opts()).unwrap();
        prop_assert!(rel_diff(&x, &common::pinv_solution(&model.op, &model.b)) <= 1e-8);
        let prior = rng.prior(n);
        let (x, _) = pcgls_solve(&model, &prior, &exact_opts()).unwrap();
        prop_assert!(rel_diff(&x, &weighted_min_norm(&model.op, &prior, &model.b)) <= 1e-8);
    }
}
