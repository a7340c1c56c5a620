use std::f64::consts::PI;

/// Bessel function of the first kind of order one.
///
/// Power series for `|x| < 4`, Miller's backward recurrence (normalized with
/// `J₀ + 2ΣJ₂ₖ = 1`) up to `|x| = 50`, and the Hankel asymptotic expansion beyond.
/// Absolute accuracy is about `1e-14` over the real line.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < 4.0 {
        series(ax)
    } else if ax <= 50.0 {
        miller(ax)
    } else {
        hankel(ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn series(x: f64) -> f64 {
    let h = 0.5 * x;
    let q = h * h;
    let mut term = h;
    let mut sum = h;
    for k in 1..40 {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(x: f64) -> f64 {
    let start = 2 * ((x as usize + 40 + (12.0 * x.sqrt()) as usize) / 2);
    let (mut jp1, mut j) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        // j holds J_k, jp1 holds J_{k+1}; step to J_{k−1}.
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if k - 1 == 1 {
            j1 = j;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            j1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j;
    j1 / norm
}

fn hankel(x: f64) -> f64 {
    let mu = 4.0;
    let z = 8.0 * x;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * z);
        if term.abs() < 1e-17 {
            break;
        }
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let chi = x - 0.75 * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Airy kernel `(J₁(κt)/(κt))²`; equals `1/4` at `t = 0`.
pub fn airy_kernel(t: f64, kappa: f64) -> f64 {
    let x = kappa * t;
    if x.abs() < 1e-8 {
        let r = 0.5 - x * x / 16.0;
        return r * r;
    }
    let r = bessel_j1(x) / x;
    r * r
}
