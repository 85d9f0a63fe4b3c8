//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

/// `K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt` by the trapezoid rule,
/// which converges geometrically for this integrand. Returned as
/// `e^x K_nu(x)` so large arguments do not underflow.
pub fn scaled_bessel_k(nu: f64, x: f64) -> f64 {
    let h = 0.002;
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        // e^{-x (cosh t - 1)}, with cosh t - 1 = 2 sinh^2(t/2) to keep digits
        let s = (0.5 * t).sinh();
        let term = (-2.0 * x * s * s).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    sum * h
}

pub fn bessel_k_oracle(nu: f64, x: f64) -> f64 {
    scaled_bessel_k(nu, x) * (-x).exp()
}

/// Solves `w e^w = x` by bisection on `[lo, hi]`, assuming a sign change.
pub fn lambert_bisect(x: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f = |w: f64| w * w.exp() - x;
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Kolmogorov–Smirnov distance between a sample and a CDF.
pub fn ks_distance(mut sample: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    d
}
