use crate::error::{Error, Result};
use crate::operators::{vector, LinearOperator, PriorconditionedOperator};
use crate::priors::GaussianPrior;
use crate::solvers::{IterationTrace, ObservationModel, SolveOptions, StopReason};
use crate::Real;

/// Normal-equation residual reduction `‖r_j‖/‖r_0‖` treated as stagnation.
pub const STAGNATION_RATIO: f64 = 1e-14;

/// Plain CGLS from `x_0 = 0`, stopped by the discrepancy principle.
pub fn cgls_solve<T: Real, O: LinearOperator<T>>(
    model: &ObservationModel<T, O>,
    opts: &SolveOptions,
) -> Result<(Vec<T>, IterationTrace<T>)> {
    opts.validate()?;
    let threshold = model.discrepancy_threshold(opts.tau);
    let (x, trace) = run(&model.op, &model.b, threshold, opts, |w| w.to_vec())?;
    Ok((x, trace))
}

/// CGLS on `A B⁻¹ w = b` from `w_0 = 0`; iterates are mapped back with `x̃ = B⁻¹ w`.
pub fn pcgls_solve<T: Real, O: LinearOperator<T>>(
    model: &ObservationModel<T, O>,
    prior: &GaussianPrior<T>,
    opts: &SolveOptions,
) -> Result<(Vec<T>, IterationTrace<T>)> {
    opts.validate()?;
    let op = PriorconditionedOperator::new(&model.op, prior)?;
    let threshold = model.discrepancy_threshold(opts.tau);
    let (w, trace) = run(&op, &model.b, threshold, opts, |w| {
        prior.solve_b(w).expect("dimension checked")
    })?;
    let x = prior.solve_b(&w)?;
    Ok((x, trace))
}

/// Hestenes–Stiefel CGLS. Returns the final iterate in the operator's own coordinates.
fn run<T: Real, O: LinearOperator<T>>(
    op: &O,
    b: &[T],
    threshold: T,
    opts: &SolveOptions,
    map_iterate: impl Fn(&[T]) -> Vec<T>,
) -> Result<(Vec<T>, IterationTrace<T>)> {
    let (m, n) = (op.nrows(), op.ncols());
    crate::error::check_len("cgls: data length", m, b.len())?;

    let mut x = vec![T::zero(); n];
    let mut d = b.to_vec();
    let mut r = op.apply_adjoint(&d)?;
    let mut p = r.clone();
    let mut q = vec![T::zero(); m];
    let mut gamma = vector::dot(&r, &r);
    let r0 = gamma.sqrt();
    let stag = T::lit(STAGNATION_RATIO) * r0;

    let mut trace = IterationTrace {
        iterates: Vec::new(),
        alphas: Vec::new(),
        betas: Vec::new(),
        discrepancy_norms: vec![vector::norm2(&d)],
        nres_norms: vec![r0],
        basis: opts.record_basis.then(Vec::new),
        stop_reason: StopReason::MaxIter,
        threshold,
    };
    if opts.record_iterates {
        trace.iterates.push(map_iterate(&x));
    }
    if !vector::all_finite(b) || !r0.is_finite() {
        return Err(Error::NotFinite {
            context: "CGLS initial residual",
            iteration: 0,
        });
    }

    let disc0 = trace.discrepancy_norms[0];
    if disc0 * disc0 < threshold {
        trace.stop_reason = StopReason::Discrepancy;
        return Ok((x, trace));
    }
    if r0 == T::zero() {
        trace.stop_reason = StopReason::Stagnation;
        return Ok((x, trace));
    }

    for j in 0..opts.max_iter {
        if let Some(basis) = trace.basis.as_mut() {
            let rn = gamma.sqrt();
            basis.push(r.iter().map(|&v| v / rn).collect());
        }
        op.apply_into(&p, &mut q);
        let delta = vector::dot(&q, &q);
        if delta == T::zero() {
            if let Some(basis) = trace.basis.as_mut() {
                basis.pop();
            }
            trace.stop_reason = StopReason::Stagnation;
            break;
        }
        let alpha = gamma / delta;
        vector::axpy(alpha, &p, &mut x);
        vector::axpy(-alpha, &q, &mut d);
        op.apply_adjoint_into(&d, &mut r);
        let gamma_new = vector::dot(&r, &r);
        let dn = vector::norm2(&d);
        if !alpha.is_finite() || !gamma_new.is_finite() || !dn.is_finite() {
            return Err(Error::NotFinite {
                context: "CGLS recurrence",
                iteration: j + 1,
            });
        }

        trace.alphas.push(alpha);
        trace.discrepancy_norms.push(dn);
        trace.nres_norms.push(gamma_new.sqrt());
        if opts.record_iterates {
            trace.iterates.push(map_iterate(&x));
        }

        if dn * dn < threshold {
            trace.stop_reason = StopReason::Discrepancy;
            break;
        }
        if gamma_new.sqrt() <= stag {
            trace.stop_reason = StopReason::Stagnation;
            break;
        }
        if j + 1 == opts.max_iter {
            trace.stop_reason = StopReason::MaxIter;
            break;
        }
        let beta = gamma_new / gamma;
        trace.betas.push(beta);
        for (pi, &ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        gamma = gamma_new;
    }
    Ok((x, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{DenseMatrix, IdentityOperator};

    #[test]
    fn identity_system_converges_in_one_step() {
        let model = ObservationModel::new(IdentityOperator { n: 2 }, vec![1.0f64, 0.0], 1e-12).unwrap();
        let (x, trace) = cgls_solve(&model, &SolveOptions::default()).unwrap();
        assert_eq!(trace.iterations(), 1);
        assert!((x[0] - 1.0).abs() < 1e-15 && x[1].abs() < 1e-15);
        assert_eq!(trace.stop_reason, StopReason::Discrepancy);
    }

    #[test]
    fn zero_normal_residual_stagnates_at_zero() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let model = ObservationModel::new(&a, vec![0.0, 1.0], 1e-6).unwrap();
        let (x, trace) = cgls_solve(&model, &SolveOptions::default()).unwrap();
        assert_eq!(x, vec![0.0, 0.0]);
        assert_eq!(trace.stop_reason, StopReason::Stagnation);
        assert_eq!(trace.iterations(), 0);
    }

    #[test]
    fn non_finite_data_is_an_error() {
        let model = ObservationModel::new(IdentityOperator { n: 2 }, vec![f64::NAN, 0.0], 1.0).unwrap();
        assert!(matches!(
            cgls_solve(&model, &SolveOptions::default()),
            Err(Error::NotFinite { .. })
        ));
    }

    #[test]
    fn beta_convention_is_one_short() {
        let a = DenseMatrix::from_fn(3, 6, |i, j| 1.0 / (1.0 + i as f64 + 2.0 * j as f64));
        let model = ObservationModel::new(&a, vec![1.0, 0.5, -0.2], 1e-12).unwrap();
        let (_, trace) = cgls_solve(&model, &SolveOptions::default()).unwrap();
        let k = trace.iterations();
        assert!(k >= 1);
        assert_eq!(trace.betas.len() + 1, k);
        assert_eq!(trace.discrepancy_norms.len(), k + 1);
        assert_eq!(trace.basis.as_ref().unwrap().len(), k);
    }

    #[test]
    fn rejects_tau_below_one() {
        let model = ObservationModel::new(IdentityOperator { n: 1 }, vec![1.0], 1.0).unwrap();
        let opts = SolveOptions { tau: 0.5, ..Default::default() };
        assert!(cgls_solve(&model, &opts).is_err());
    }
}
