use crate::error::{Error, Result};
use crate::operators::BandMatrix;
use crate::priors::GaussianPrior;
use crate::Real;

/// Search interval for automatic boundary-weight calibration.
pub const ALPHA_BRACKET: (f64, f64) = (1e-6, 1e2);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaChoice {
    /// Calibrate α so that the pointwise prior variance is as uniform as possible.
    Auto,
    Value(f64),
}

/// Second-order smoothness prior on a 1D grid with boundary weight `alpha`.
///
/// `L = β·M`, where interior rows of `M` are `(-1, 2, -1)` and the first and last rows carry
/// `α` on the diagonal only. `C⁻¹ = LᵀL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderPrior1D {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl SecondOrderPrior1D {
    pub fn matrix<T: Real>(&self) -> BandMatrix<T> {
        let n = self.n;
        let beta = T::lit(self.beta);
        let mut l = BandMatrix::zeros(n, 1, 1);
        l.set(0, 0, beta * T::lit(self.alpha));
        l.set(n - 1, n - 1, beta * T::lit(self.alpha));
        for i in 1..n - 1 {
            l.set(i, i - 1, -beta);
            l.set(i, i, beta * T::lit(2.0));
            l.set(i, i + 1, -beta);
        }
        l
    }

    pub fn prior<T: Real>(&self) -> Result<GaussianPrior<T>> {
        GaussianPrior::from_factor(self.matrix())
    }
}

/// `max diag(C) / min diag(C)` for the second-order prior (independent of β).
pub fn variance_spread(n: usize, alpha: f64) -> Result<f64> {
    let prior: GaussianPrior<f64> = SecondOrderPrior1D { n, alpha, beta: 1.0 }.prior()?;
    let var = prior.variances();
    let max = var.iter().cloned().fold(f64::MIN, f64::max);
    let min = var.iter().cloned().fold(f64::MAX, f64::min);
    Ok(max / min)
}

/// Boundary weight α minimizing the variance spread, by golden-section search on `log α`.
///
/// `beta` only rescales `C` and does not move the optimum; it is validated and otherwise unused.
pub fn calibrate_alpha(n: usize, beta: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "second-order prior needs n >= 3, got {n}"
        )));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    let (lo, hi) = ALPHA_BRACKET;
    let f = |t: f64| variance_spread(n, t.exp());
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-6 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let t = 0.5 * (a + b);
    let best = f(t)?;
    let edge = 1e-3;
    if t - lo.ln() < edge || hi.ln() - t < edge {
        return Err(Error::BracketExhausted {
            lo,
            hi,
            best_ratio: best,
        });
    }
    Ok(t.exp())
}

/// Builds the second-order prior, calibrating α when requested.
pub fn build_second_order_prior<T: Real>(
    n: usize,
    beta: f64,
    alpha: AlphaChoice,
) -> Result<(SecondOrderPrior1D, GaussianPrior<T>)> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "second-order stencil needs n >= 3, got {n}"
        )));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    let alpha = match alpha {
        AlphaChoice::Auto => calibrate_alpha(n, beta)?,
        AlphaChoice::Value(a) if a > 0.0 => a,
        AlphaChoice::Value(a) => {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {a}")))
        }
    };
    let spec = SecondOrderPrior1D { n, alpha, beta };
    Ok((spec, spec.prior()?))
}
