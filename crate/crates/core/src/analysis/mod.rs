//! Analytic companions to the simulator: exact and asymptotic forms of the
//! outage integrals, the Q_m lower bound, and diversity-slope fitting.

mod e0;
mod qm;
mod slope;
mod tterms;

pub use e0::{p_e0_evt, p_e0_exact, p_e0_high_snr};
pub use qm::qm_lower_bound;
pub use slope::{fit_diversity_slope, top_decade_window};
pub use tterms::{t_terms_wpt, TTerms};

/// One sample of a figure curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    /// Linear transmit-to-noise power ratio.
    pub power_ratio: f64,
    pub metric: f64,
    /// Zero for analytic points.
    pub ci_half_width: f64,
}

impl CurvePoint {
    pub fn analytic(power_ratio: f64, metric: f64) -> Self {
        CurvePoint {
            power_ratio,
            metric,
            ci_half_width: 0.0,
        }
    }
}

/// Least-squares line through `(log10 power, log10 metric)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
    /// Points in the window dropped because their metric was zero.
    pub points_excluded: usize,
}
