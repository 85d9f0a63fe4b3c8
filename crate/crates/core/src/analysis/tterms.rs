//! Exact decomposition of the WPT outage probability by the number of
//! devices that fall into the second-stage group.
//!
//! Conditioned on `x = |h0|^2`, a device fails either below `tau` with
//! `gamma < c2` or above `tau` with `gamma < a(x)`, where
//! `c2 = eps_s / (eta p abar)` and `a(x) = c2 (p x + 1)`. Devices are
//! independent given `x`, so
//!
//! `T_m | x = C(M, m) F(min(tau, c2))^m (F(a) - F(tau))_+^(M-m)`.
//!
//! The outer expectation over `x ~ Exp(lambda0)` is taken in `y = lambda0 x`
//! with breakpoints where `tau` leaves zero, crosses `c2` and crosses `a`.

use crate::channel::{gamma_cdf, LinkScale, SystemParams};
use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::wpt::tau;

const Y_MAX: f64 = 60.0;
const TOL: Tolerance = Tolerance::new(1e-16, 1e-10);

#[derive(Debug, Clone, PartialEq)]
pub struct TTerms {
    /// `T_0 .. T_M`.
    pub terms: Vec<f64>,
    /// Whether `bar_eps0 bar_epss < 1`. When false the admission region in
    /// `|h0|^2` is unbounded and the terms describe an error floor.
    pub condition_holds: bool,
}

impl TTerms {
    pub fn total(&self) -> f64 {
        self.terms.iter().sum()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

struct Conditional {
    params: SystemParams,
    scale: LinkScale,
    p: f64,
    c2: f64,
}

impl Conditional {
    /// `(F(min(tau, c2)), (F(a) - F(tau))_+)` at `x = |h0|^2`.
    fn probs(&self, x: f64) -> (f64, f64) {
        let t = tau(&self.params, x, self.p);
        let a = self.c2 * (self.p * x + 1.0);
        let fb = gamma_cdf(t.min(self.c2), self.scale).unwrap_or(1.0);
        let d = if a > t {
            let fa = gamma_cdf(a, self.scale).unwrap_or(1.0);
            let ft = gamma_cdf(t, self.scale).unwrap_or(1.0);
            (fa - ft).max(0.0)
        } else {
            0.0
        };
        (fb, d)
    }
}

/// `T_0, ..., T_M` for WPT at transmit SNR `p`.
///
/// When `bar_eps0 bar_epss >= 1` the terms are still computed, by quadrature
/// over the unbounded region, and `condition_holds` is false.
pub fn t_terms_wpt(params: &SystemParams, p: f64) -> Result<TTerms> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter {
            name: "transmit_snr",
            value: p,
            constraint: "must be positive and finite",
        });
    }
    let m_dev = params.m_devices();
    let condition_holds = params.full_diversity_condition();
    let lambda0 = params.lambda0();
    let cond = Conditional {
        params: *params,
        scale: params.link_scale(),
        p,
        c2: params.bar_epss() / (params.eta() * p * params.bar_alpha()),
    };

    let e0 = params.bar_eps0();
    let es = params.bar_epss();
    let y1 = lambda0 * e0 / p;
    let y2 = lambda0 * e0 * (1.0 + es) / p;
    let y3 = if condition_holds {
        lambda0 * e0 * (1.0 + es) / (p * (1.0 - e0 * es))
    } else {
        f64::INFINITY
    };
    let mut breaks = vec![0.0];
    for y in [y1, y2, y3] {
        let y = y.min(Y_MAX);
        if y > *breaks.last().expect("nonempty") {
            breaks.push(y);
        }
    }
    if *breaks.last().expect("nonempty") < Y_MAX && !condition_holds {
        breaks.push(Y_MAX);
    }

    let mut terms = vec![0.0; m_dev + 1];
    for (m, term) in terms.iter_mut().enumerate() {
        let coef = binomial(m_dev, m);
        let integrand = |y: f64| {
            let (fb, d) = cond.probs(y / lambda0);
            let v = fb.powi(m as i32) * d.powi((m_dev - m) as i32);
            if v == 0.0 {
                0.0
            } else {
                v * (-y).exp()
            }
        };
        let mut acc = 0.0;
        for w in breaks.windows(2) {
            acc += integrate(integrand, w[0], w[1], TOL)?.value;
        }
        if m == m_dev && y3 < Y_MAX {
            // Beyond y3 every device sits below tau and only c2 matters.
            let fc2 = gamma_cdf(cond.c2, cond.scale)?;
            acc += fc2.powi(m_dev as i32) * (-y3).exp();
        }
        *term = (coef * acc).clamp(0.0, 1.0);
    }
    Ok(TTerms {
        terms,
        condition_holds,
    })
}
