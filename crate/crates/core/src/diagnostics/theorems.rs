use super::lanczos::lanczos_tridiagonal;
use super::spectral::SpectralData;
use crate::error::{Error, Result};
use crate::solvers::IterationTrace;
use crate::Real;

fn initial_residual<T: Real>(trace: &IterationTrace<T>) -> Result<Vec<T>> {
    let basis = trace
        .basis
        .as_ref()
        .filter(|b| !b.is_empty())
        .ok_or_else(|| Error::InvalidArgument("trace has no recorded basis".into()))?;
    let r0 = trace.nres_norms[0];
    Ok(basis[0].iter().map(|&v| v * r0).collect())
}

/// Energy-norm errors `‖x_∞ − x_k‖_{AᵀA}` for `k = 0..=K`.
///
/// This equals the discrepancy projected onto `R(A)`; when `A` has full row rank it is the
/// recorded discrepancy itself, otherwise the component in `N(Aᵀ)`, of squared norm
/// `‖b‖² − Σᵢ (r₀ᵀqᵢ)²/λᵢ`, is removed.
pub fn energy_errors<T: Real>(trace: &IterationTrace<T>, spectral: &SpectralData<T>) -> Result<Vec<T>> {
    if spectral.rank == spectral.nrows || trace.alphas.is_empty() {
        return Ok(trace.discrepancy_norms.clone());
    }
    let r0 = initial_residual(trace)?;
    let w = spectral.squared_projections(&r0)?;
    let visible: T = w.iter().zip(&spectral.eigenvalues).map(|(&w, &l)| w / l).sum();
    let d0 = trace.discrepancy_norms[0];
    let floor = d0 * d0 - visible;
    Ok(trace
        .discrepancy_norms
        .iter()
        .map(|&d| (d * d - floor).max(T::zero()).sqrt())
        .collect())
}

/// `S_k = Σᵢ Πⱼ(λᵢ − θⱼ)² (r₀ᵀqᵢ)²` over the nonzero spectrum.
pub fn residual_polynomial_sum<T: Real>(ritz: &[T], spectral: &SpectralData<T>, weights: &[T]) -> T {
    spectral
        .eigenvalues
        .iter()
        .zip(weights)
        .map(|(&l, &w)| ritz.iter().fold(w, |acc, &th| acc * (l - th) * (l - th)))
        .sum()
}

/// Solves `‖e_k‖² = S_k / ξ^{2k+1}` for the mean-value point `ξ_k`.
///
/// `‖e_k‖` is the energy-norm error (see [`energy_errors`]). Returns `None` when it vanishes
/// or `k = 0`.
pub fn residual_identity_xi<T: Real>(
    trace: &IterationTrace<T>,
    spectral: &SpectralData<T>,
    k: usize,
) -> Result<Option<T>> {
    let errors = energy_errors(trace, spectral)?;
    xi_with_errors(trace, spectral, &errors, k)
}

fn xi_with_errors<T: Real>(
    trace: &IterationTrace<T>,
    spectral: &SpectralData<T>,
    errors: &[T],
    k: usize,
) -> Result<Option<T>> {
    if k == 0 {
        return Ok(None);
    }
    let view = lanczos_tridiagonal(trace, k)?;
    let r0 = initial_residual(trace)?;
    let w = spectral.squared_projections(&r0)?;
    let s = residual_polynomial_sum(&view.ritz, spectral, &w);
    let e = errors[k];
    if e == T::zero() || s <= T::zero() {
        return Ok(None);
    }
    let xi = (s / (e * e)).powf(T::one() / T::from_usize(2 * k + 1).expect("small integer"));
    Ok(xi.is_finite().then_some(xi))
}

/// `ξ_k` for `k = 0..=K` (`None` where undefined).
pub fn xi_history<T: Real>(trace: &IterationTrace<T>, spectral: &SpectralData<T>) -> Result<Vec<Option<T>>> {
    let errors = energy_errors(trace, spectral)?;
    (0..=trace.alphas.len())
        .map(|k| xi_with_errors(trace, spectral, &errors, k))
        .collect()
}

/// `2ρᵏ‖e_0‖ − ‖e_k‖` with `ρ = (√κ − 1)/(√κ + 1)`, measured in the energy norm.
pub fn convergence_bound_margin<T: Real>(
    trace: &IterationTrace<T>,
    spectral: &SpectralData<T>,
    k: usize,
) -> Result<T> {
    let errors = energy_errors(trace, spectral)?;
    margin_with_errors(spectral, &errors, k)
}

fn margin_with_errors<T: Real>(spectral: &SpectralData<T>, errors: &[T], k: usize) -> Result<T> {
    let e_k = *errors.get(k).ok_or_else(|| {
        Error::InvalidArgument(format!("bound margin at {k}, trace holds {}", errors.len() - 1))
    })?;
    if spectral.rank == 0 {
        return Ok(-e_k);
    }
    let sk = spectral.condition_number().sqrt();
    let rho = (sk - T::one()) / (sk + T::one());
    let bound = T::lit(2.0) * rho.powi(k as i32) * errors[0];
    Ok(bound - e_k)
}

/// Bound margins for `k = 0..=K`.
pub fn bound_margins<T: Real>(trace: &IterationTrace<T>, spectral: &SpectralData<T>) -> Result<Vec<T>> {
    let errors = energy_errors(trace, spectral)?;
    (0..errors.len()).map(|k| margin_with_errors(spectral, &errors, k)).collect()
}
