//! Reproducible Gaussian noise.
//!
//! Uniform deviates come from ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`), mapped
//! to `[0, 1)` as `(u64 >> 11) · 2⁻⁵³`. Pairs of uniforms `(u₁, u₂)` become standard normals
//! through the Box–Muller transform `√(−2 ln(1−u₁)) · (cos 2πu₂, sin 2πu₂)`.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::Real;

/// `count` standard normal deviates for `seed`; identical seeds give identical bits.
pub fn standard_normals(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut uniform = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let mut out = Vec::with_capacity(count + 1);
    while out.len() < count {
        let u1 = 1.0 - uniform();
        let u2 = uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        out.push(radius * angle.cos());
        out.push(radius * angle.sin());
    }
    out.truncate(count);
    out
}

/// `clean + σ·z` with `z` i.i.d. standard normal from `seed`.
pub fn add_noise<T: Real>(clean: &[T], sigma: T, seed: u64) -> Vec<T> {
    if sigma == T::zero() {
        return clean.to_vec();
    }
    standard_normals(clean.len(), seed)
        .into_iter()
        .zip(clean)
        .map(|(z, &c)| c + sigma * T::lit(z))
        .collect()
}
