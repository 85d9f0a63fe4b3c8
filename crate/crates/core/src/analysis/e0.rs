//! Probability that no device is admissible under BAC (the error floor).
//!
//! Both quadratures run in `t = sqrt(lambda_h lambda_g x)`, which turns the
//! `K0` log singularity at the origin into a smooth `t K0(2t)` factor.

use crate::channel::SystemParams;
use crate::error::{Error, Result};
use crate::quad::{integrate_pieces, Tolerance};
use crate::specfun::{bessel_k0, lambert_w, x_k1, BranchW};

const T_MAX: f64 = 45.0;
const TOL: Tolerance = Tolerance::new(1e-14, 1e-12);

fn check_power(p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "transmit_snr",
            value: p,
            constraint: "must be positive and finite",
        })
    }
}

/// `lambda0 beta^2 eps0 / (lambda_h lambda_g)`: the Gaussian width of the
/// weight in `t`.
fn kappa(params: &SystemParams) -> f64 {
    params.lambda0() * params.beta() * params.beta() * params.eps0() / params.link_scale().rate_product()
}

fn breaks(kappa: f64, m: usize) -> Vec<f64> {
    let upper = T_MAX.min((60.0 / kappa).sqrt()).min(T_MAX / m as f64 + 2.0);
    [0.0, 1.0 / 64.0, 1.0 / 16.0, 0.25, 1.0]
        .iter()
        .map(|f| f * upper)
        .collect()
}

fn sf_kernel(t: f64) -> f64 {
    x_k1(2.0 * t).unwrap_or(0.0)
}

/// `P(E0)` at finite power: one minus the probability that the weakest
/// device clears the admission threshold.
pub fn p_e0_exact(params: &SystemParams, p: f64) -> Result<f64> {
    check_power(p)?;
    let m = params.m_devices();
    let k = kappa(params);
    let integrand = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        let k0 = bessel_k0(2.0 * t).unwrap_or(0.0);
        4.0 * t * k0 * (-k * t * t).exp() * sf_kernel(t).powi(m as i32 - 1)
    };
    let est = integrate_pieces(integrand, &breaks(k, m), TOL)?;
    let admit = m as f64 * (-params.lambda0() * params.eps0() / p).exp() * est.value;
    Ok((1.0 - admit).clamp(0.0, 1.0))
}

/// Limit of [`p_e0_exact`] as the power grows without bound.
pub fn p_e0_high_snr(params: &SystemParams) -> Result<f64> {
    let m = params.m_devices() as i32;
    let k = kappa(params);
    let integrand = |t: f64| 2.0 * k * t * (-k * t * t).exp() * sf_kernel(t).powi(m);
    let est = integrate_pieces(integrand, &breaks(k, m as usize), TOL)?;
    Ok(est.value.clamp(0.0, 1.0))
}

/// Extreme-value approximation of the high-SNR floor for many devices.
/// Needs `M >= 3` so that `-1/M` lies inside the domain of `W-1`.
pub fn p_e0_evt(params: &SystemParams) -> Result<f64> {
    let m = params.m_devices();
    if m < 3 {
        return Err(Error::Domain {
            function: "p_e0_evt",
            value: m as f64,
            constraint: "requires at least 3 devices",
        });
    }
    let k = params.lambda0() * params.beta() * params.beta() * params.eps0();
    let w = lambert_w(BranchW::MinusOne, -1.0 / m as f64)?;
    let l = params.link_scale().rate_product();
    Ok(k / (k - m as f64 * l * w))
}
