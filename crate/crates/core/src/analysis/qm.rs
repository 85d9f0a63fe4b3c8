//! Lower bound on `Q_m`, the probability that exactly `m` devices are
//! admissible under BAC and the strongest of them still misses `rs`.
//!
//! Replacing the cascaded gain by a lossless `|g|^2 = 1` link makes the
//! device gains `Exp(lambda_h)`; the bound is then a double integral over
//! `|s0|^2 = y` and `|h0|^2`. With `v = p |h0|^2 / eps0 - 1` the admission
//! threshold becomes `v / (p beta^2)` and the inner integral splits at
//! `U = eps_s / y`: below it the whole admitted set must fall under `theta`,
//! above it under the rate threshold, which has a closed form.

use crate::channel::SystemParams;
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_pieces, Tolerance};

const INNER_TOL: Tolerance = Tolerance::new(1e-300, 1e-10);
const OUTER_TOL: Tolerance = Tolerance::new(1e-300, 1e-8);

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Lossless-link lower bound on `Q_m` for `1 <= m <= M - 1`.
pub fn qm_lower_bound(params: &SystemParams, p: f64, m: usize) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter {
            name: "transmit_snr",
            value: p,
            constraint: "must be positive and finite",
        });
    }
    let m_dev = params.m_devices();
    if m == 0 || m >= m_dev {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m as f64,
            constraint: "must lie in [1, M - 1]",
        });
    }
    let eps_s = params.epss();
    if eps_s == 0.0 {
        return Ok(0.0);
    }
    let b2 = params.beta() * params.beta();
    let c0 = params.lambda0() * params.eps0() / p;
    let c1 = params.lambdah() / (p * b2);
    let rest = (m_dev - m) as f64;
    let r = rest * c1 + c0;
    let mi = m as i32;
    // Beyond this v the integrand is below e^-60 of its scale.
    let v_cut = 60.0 / r;

    let lower_region = |u: f64| -> Result<f64> {
        let hi = u.min(v_cut);
        let mut breaks = vec![0.0];
        breaks.extend([1.0, 4.0, 16.0].iter().map(|k| k / r).filter(|&b| b < hi));
        breaks.push(hi);
        let est = integrate_pieces(
            |v| (-(c1 * v)).exp_m1().abs().powi(mi) * (-(rest * c1 * v) - c0 * (1.0 + v)).exp() * c0,
            &breaks,
            INNER_TOL,
        )?;
        Ok(est.value)
    };
    let upper_region = |u: f64| -> f64 {
        (-(c1 * u)).exp_m1().abs().powi(mi) * c0 * (-c0 - r * u).exp() / r
    };
    let given_s0 = |y: f64| -> Result<f64> {
        let u = eps_s / y;
        Ok(lower_region(u)? + upper_region(u))
    };

    let mut failure = None;
    let mut record = |e: Error| {
        if failure.is_none() {
            failure = Some(e);
        }
        0.0
    };
    // y in (0, 1] on a log scale, then (1, 60] directly.
    let small = integrate(
        |s| {
            let y = s.exp();
            match given_s0(y) {
                Ok(v) => v * (-y).exp() * y,
                Err(e) => record(e),
            }
        },
        -50.0,
        0.0,
        OUTER_TOL,
    )?;
    let large = integrate(
        |y| match given_s0(y) {
            Ok(v) => v * (-y).exp(),
            Err(e) => record(e),
        },
        1.0,
        60.0,
        OUTER_TOL,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((binomial(m_dev, m) * (small.value + large.value)).clamp(0.0, 1.0))
}
