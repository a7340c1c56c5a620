use crate::error::{Error, Result};
use crate::operators::svd::tridiagonal_eigenvalues;
use crate::operators::{vector, DenseMatrix, LinearOperator};
use crate::solvers::IterationTrace;
use crate::Real;

/// Asymmetry of the assembled `T_k` (relative to its largest entry) above which the
/// explicitly projected matrix is used instead.
pub const ASYMMETRY_LIMIT: f64 = 1e-6;

/// The Lanczos tridiagonal matrix of `AᵀA` reconstructed from CGLS coefficients.
#[derive(Debug, Clone)]
pub struct LanczosView<T: Real> {
    pub k: usize,
    /// Symmetric tridiagonal `T_k`.
    pub t: DenseMatrix<T>,
    /// Eigenvalues of `T_k`, ascending.
    pub ritz: Vec<T>,
    /// `diag(α_0 … α_{k−1})`
    pub delta: DenseMatrix<T>,
    /// `diag(‖r_0‖ … ‖r_{k−1}‖)`
    pub phi: DenseMatrix<T>,
    /// Unit upper bidiagonal with `−β_j` on the superdiagonal.
    pub ubid: DenseMatrix<T>,
    /// `L_k = Φ_k U_k Φ_k⁻¹`
    pub l: DenseMatrix<T>,
    /// `max|T − Tᵀ| / max|T|` before symmetrization.
    pub asymmetry: T,
}

impl<T: Real> LanczosView<T> {
    /// Diagonal and off-diagonal of `T_k`.
    pub fn bands(&self) -> (Vec<T>, Vec<T>) {
        let d = (0..self.k).map(|i| self.t[(i, i)]).collect();
        let e = (1..self.k).map(|i| self.t[(i, i - 1)]).collect();
        (d, e)
    }
}

fn check_k<T: Real>(trace: &IterationTrace<T>, k: usize) -> Result<()> {
    if k == 0 || k > trace.alphas.len() || trace.betas.len() + 1 < k || trace.nres_norms.len() < k {
        return Err(Error::InvalidArgument(format!(
            "Lanczos view of order {k} requested, trace holds {} iterations",
            trace.alphas.len()
        )));
    }
    Ok(())
}

/// Assembles `T_k = L_kᵀ Δ_k⁻¹ L_k` with `L_k = Φ_k U_k Φ_k⁻¹` and computes its eigenvalues.
///
/// `L_k` is upper bidiagonal, so the product is formed over its two nonzero diagonals.
pub fn lanczos_tridiagonal<T: Real>(trace: &IterationTrace<T>, k: usize) -> Result<LanczosView<T>> {
    check_k(trace, k)?;
    let alpha = &trace.alphas[..k];
    let phi_d = &trace.nres_norms[..k];
    let delta = DenseMatrix::diag(alpha);
    let phi = DenseMatrix::diag(phi_d);
    let mut ubid = DenseMatrix::identity(k);
    let mut l = DenseMatrix::identity(k);
    for j in 0..k.saturating_sub(1) {
        ubid[(j, j + 1)] = -trace.betas[j];
        l[(j, j + 1)] = phi_d[j] * (-trace.betas[j]) / phi_d[j + 1];
    }

    // (LᵀΔ⁻¹L)_{ij} = Σ_r L_{ri} L_{rj} / α_r, with r ∈ {i−1, i} ∩ {j−1, j}.
    let mut t = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in i.saturating_sub(1)..(i + 2).min(k) {
            let mut s = T::zero();
            for r in i.max(j).saturating_sub(1)..=i.min(j) {
                s += l[(r, i)] * l[(r, j)] / alpha[r];
            }
            t[(i, j)] = s;
        }
    }
    let scale = t.max_abs();
    let mut asym = T::zero();
    for i in 0..k {
        for j in 0..i {
            asym = asym.max((t[(i, j)] - t[(j, i)]).abs());
        }
    }
    let asymmetry = if scale > T::zero() { asym / scale } else { T::zero() };
    for i in 0..k {
        for j in 0..i {
            let s = (t[(i, j)] + t[(j, i)]) * T::lit(0.5);
            t[(i, j)] = s;
            t[(j, i)] = s;
        }
    }
    let mut view = LanczosView {
        k,
        t,
        ritz: Vec::new(),
        delta,
        phi,
        ubid,
        l,
        asymmetry,
    };
    let (d, e) = view.bands();
    view.ritz = tridiagonal_eigenvalues(&d, &e);
    Ok(view)
}

/// `V_kᵀ (AᵀA) V_k` from the recorded residual basis.
pub fn projected_tridiagonal<T: Real, O: LinearOperator<T> + ?Sized>(
    trace: &IterationTrace<T>,
    op: &O,
    k: usize,
) -> Result<DenseMatrix<T>> {
    check_k(trace, k)?;
    let basis = trace
        .basis
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("trace has no recorded basis".into()))?;
    let mut images = Vec::with_capacity(k);
    for v in &basis[..k] {
        let av = op.apply(v)?;
        images.push(op.apply_adjoint(&av)?);
    }
    Ok(DenseMatrix::from_fn(k, k, |i, j| vector::dot(&basis[i], &images[j])))
}

/// Like [`lanczos_tridiagonal`], but falls back to the explicit projection when the
/// assembled matrix is too asymmetric.
pub fn lanczos_tridiagonal_checked<T: Real, O: LinearOperator<T> + ?Sized>(
    trace: &IterationTrace<T>,
    op: &O,
    k: usize,
) -> Result<(LanczosView<T>, bool)> {
    let mut view = lanczos_tridiagonal(trace, k)?;
    if view.asymmetry.to_f64_lossy() <= ASYMMETRY_LIMIT {
        return Ok((view, false));
    }
    let p = projected_tridiagonal(trace, op, k)?;
    view.t = p.add(&p.transpose())?.scaled(T::lit(0.5));
    let (d, e) = view.bands();
    view.ritz = tridiagonal_eigenvalues(&d, &e);
    Ok((view, true))
}

/// Ritz values of `T_1, …, T_K` for every completed iteration.
pub fn ritz_history<T: Real>(trace: &IterationTrace<T>) -> Result<Vec<Vec<T>>> {
    (1..=trace.alphas.len())
        .map(|k| lanczos_tridiagonal(trace, k).map(|v| v.ritz))
        .collect()
}
