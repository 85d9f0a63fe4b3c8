//! Scenario constants, random channel generation and the distribution of the
//! cascaded gain `gamma = |g|^2 |h|^2`.
//!
//! Path loss enters as `lambda = d^phi`, used as the *rate* of the exponential
//! channel power gain (mean `d^-phi`). All powers are normalized to unit noise.

use rand::Rng;

use crate::error::{Error, Result};
use crate::specfun;

/// User-facing scenario description; validated into [`SystemParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    /// Number of energy-constrained, delay-tolerant devices (M).
    pub m_devices: usize,
    /// Time-switching fraction spent harvesting.
    pub alpha: f64,
    /// Backscatter reflection coefficient.
    pub beta: f64,
    /// Energy harvesting efficiency.
    pub eta: f64,
    /// Target rate of the delay-sensitive device, bits/channel use.
    pub r0: f64,
    /// Target rate of the delay-tolerant devices, bits/channel use.
    pub rs: f64,
    /// Path-loss exponent.
    pub phi: f64,
    /// Distance from the delay-sensitive device to the access point, m.
    pub d0: f64,
    /// Distance from the delay-tolerant devices to the access point, m.
    pub dh: f64,
    /// Distance between the delay-sensitive device and the others, m.
    pub dg: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            m_devices: 1,
            alpha: 0.5,
            beta: 0.1,
            eta: 0.1,
            r0: 0.1,
            rs: 1.2,
            phi: 3.5,
            d0: 1.0,
            dh: 1.0,
            dg: 1.0,
        }
    }
}

/// Validated scenario with the derived thresholds precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    scenario: Scenario,
    lambda0: f64,
    lambdah: f64,
    lambdag: f64,
    eps0: f64,
    epss: f64,
    bar_eps0: f64,
    bar_epss: f64,
    bar_alpha: f64,
}

fn require(ok: bool, name: &'static str, value: f64, constraint: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint,
        })
    }
}

fn positive_finite(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

impl SystemParams {
    pub fn new(s: Scenario) -> Result<Self> {
        require(s.m_devices >= 1, "m_devices", s.m_devices as f64, "must be at least 1")?;
        require(s.alpha > 0.0 && s.alpha < 1.0, "alpha", s.alpha, "alpha must lie in (0,1)")?;
        require(s.beta > 0.0 && s.beta <= 1.0, "beta", s.beta, "beta must lie in (0,1]")?;
        require(s.eta > 0.0 && s.eta <= 1.0, "eta", s.eta, "eta must lie in (0,1]")?;
        require(positive_finite(s.r0), "r0", s.r0, "r0 must be positive and finite")?;
        require(s.rs.is_finite() && s.rs >= 0.0, "rs", s.rs, "rs must be nonnegative and finite")?;
        require(positive_finite(s.phi), "phi", s.phi, "phi must be positive and finite")?;
        require(positive_finite(s.d0), "d0", s.d0, "d0 must be positive and finite")?;
        require(positive_finite(s.dh), "dh", s.dh, "dh must be positive and finite")?;
        require(positive_finite(s.dg), "dg", s.dg, "dg must be positive and finite")?;

        let one_minus = 1.0 - s.alpha;
        let p = SystemParams {
            scenario: s,
            lambda0: s.d0.powf(s.phi),
            lambdah: s.dh.powf(s.phi),
            lambdag: s.dg.powf(s.phi),
            eps0: s.r0.exp2() - 1.0,
            epss: s.rs.exp2() - 1.0,
            bar_eps0: (s.r0 / one_minus).exp2() - 1.0,
            bar_epss: (s.rs / one_minus).exp2() - 1.0,
            bar_alpha: s.alpha / one_minus,
        };
        for (name, v) in [
            ("lambda0", p.lambda0),
            ("lambdah", p.lambdah),
            ("lambdag", p.lambdag),
            ("bar_eps0", p.bar_eps0),
            ("bar_alpha", p.bar_alpha),
        ] {
            require(positive_finite(v), name, v, "derived constant must be positive and finite")?;
        }
        require(p.bar_epss.is_finite(), "bar_epss", p.bar_epss, "derived constant must be finite")?;
        Ok(p)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn m_devices(&self) -> usize {
        self.scenario.m_devices
    }

    pub fn alpha(&self) -> f64 {
        self.scenario.alpha
    }

    pub fn beta(&self) -> f64 {
        self.scenario.beta
    }

    pub fn eta(&self) -> f64 {
        self.scenario.eta
    }

    pub fn r0(&self) -> f64 {
        self.scenario.r0
    }

    pub fn rs(&self) -> f64 {
        self.scenario.rs
    }

    /// Exponential rate of `|h0|^2`.
    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    /// Exponential rate of `|h_m|^2`.
    pub fn lambdah(&self) -> f64 {
        self.lambdah
    }

    /// Exponential rate of `|g_m|^2`.
    pub fn lambdag(&self) -> f64 {
        self.lambdag
    }

    /// `2^r0 - 1`
    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    /// `2^rs - 1`
    pub fn epss(&self) -> f64 {
        self.epss
    }

    /// `2^(r0 / (1 - alpha)) - 1`
    pub fn bar_eps0(&self) -> f64 {
        self.bar_eps0
    }

    /// `2^(rs / (1 - alpha)) - 1`
    pub fn bar_epss(&self) -> f64 {
        self.bar_epss
    }

    /// `alpha / (1 - alpha)`
    pub fn bar_alpha(&self) -> f64 {
        self.bar_alpha
    }

    pub fn link_scale(&self) -> LinkScale {
        LinkScale::new(self.lambdah * self.lambdag).expect("validated rates have a positive finite product")
    }

    /// Whether `bar_eps0 * bar_epss < 1`, the condition under which WPT-NOMA
    /// has no error floor and reaches diversity M.
    pub fn full_diversity_condition(&self) -> bool {
        self.bar_eps0 * self.bar_epss < 1.0
    }

    /// Copy with a different number of devices.
    pub fn with_m_devices(&self, m: usize) -> Result<Self> {
        SystemParams::new(Scenario {
            m_devices: m,
            ..self.scenario
        })
    }
}

impl TryFrom<Scenario> for SystemParams {
    type Error = Error;

    fn try_from(s: Scenario) -> Result<Self> {
        SystemParams::new(s)
    }
}

/// Product of the exponential rates `lambda_h * lambda_g`; the single
/// parameter of the cascaded-gain distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkScale(f64);

impl LinkScale {
    pub fn new(rate_product: f64) -> Result<Self> {
        require(
            positive_finite(rate_product),
            "rate_product",
            rate_product,
            "must be positive and finite",
        )?;
        Ok(LinkScale(rate_product))
    }

    pub fn rate_product(&self) -> f64 {
        self.0
    }
}

/// One draw of every random quantity in a block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `|h0|^2`
    pub h0_sq: f64,
    /// `gamma_m = |g_m|^2 |h_m|^2`, in device order (unsorted).
    pub gamma: Vec<f64>,
    /// `|s0|^2`, the virtual fading seen by a backscattered symbol.
    pub s0_sq: f64,
}

impl ChannelRealization {
    /// Gains sorted ascending, `gamma_(1) <= ... <= gamma_(M)`.
    pub fn sorted_gamma(&self) -> Vec<f64> {
        let mut g = self.gamma.clone();
        g.sort_by(f64::total_cmp);
        g
    }

    /// Overwrites `self` with a fresh draw, reusing the gain buffer.
    pub fn resample<R: Rng + ?Sized>(&mut self, params: &SystemParams, rng: &mut R) {
        self.h0_sq = exponential(rng, params.lambda0);
        self.gamma.clear();
        for _ in 0..params.m_devices() {
            let g = exponential(rng, params.lambdag);
            let h = exponential(rng, params.lambdah);
            self.gamma.push(g * h);
        }
        self.s0_sq = exponential(rng, 1.0);
    }
}

/// Inverse-transform exponential draw `-ln(U) / rate`, `U` uniform on (0, 1].
#[inline]
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    let u = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    -u.ln() / rate
}

/// Draws `|h0|^2`, then `(|g_m|^2, |h_m|^2)` for each device, then `|s0|^2`.
pub fn sample_realization<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> ChannelRealization {
    let mut real = ChannelRealization {
        h0_sq: 0.0,
        gamma: Vec::with_capacity(params.m_devices()),
        s0_sq: 0.0,
    };
    real.resample(params, rng);
    real
}

/// Density of the unordered cascaded gain, `2 L K0(2 sqrt(L x))`.
pub fn gamma_pdf(x: f64, scale: LinkScale) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain {
            function: "gamma_pdf",
            value: x,
            constraint: "requires finite x > 0",
        });
    }
    let l = scale.rate_product();
    Ok(2.0 * l * specfun::bessel_k0(2.0 * (l * x).sqrt())?)
}

/// CDF of the unordered cascaded gain, `1 - 2 sqrt(L x) K1(2 sqrt(L x))`,
/// clamped to `[0, 1]`.
pub fn gamma_cdf(x: f64, scale: LinkScale) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain {
            function: "gamma_cdf",
            value: x,
            constraint: "requires x >= 0",
        });
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    let z = 2.0 * (scale.rate_product() * x).sqrt();
    if !z.is_finite() {
        return Ok(1.0);
    }
    Ok(specfun::one_minus_x_k1(z)?.clamp(0.0, 1.0))
}

/// Survival function `1 - F(x)`, computed directly so that powers of it stay
/// accurate in the upper tail.
pub fn gamma_sf(x: f64, scale: LinkScale) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain {
            function: "gamma_sf",
            value: x,
            constraint: "requires x >= 0",
        });
    }
    let z = 2.0 * (scale.rate_product() * x).sqrt();
    if !z.is_finite() {
        return Ok(0.0);
    }
    Ok(specfun::x_k1(z)?.clamp(0.0, 1.0))
}

/// Small-argument form of the CDF, `-L x ln(L x)`, valid for `L x < 1`.
pub fn gamma_cdf_small_x(x: f64, scale: LinkScale) -> Result<f64> {
    let lx = scale.rate_product() * x;
    if !(x.is_finite() && x > 0.0) || lx >= 1.0 {
        return Err(Error::Domain {
            function: "gamma_cdf_small_x",
            value: x,
            constraint: "requires x > 0 and lambda_h lambda_g x < 1",
        });
    }
    Ok(-lx * lx.ln())
}

/// Density of the smallest of M i.i.d. cascaded gains,
/// `M f(x) (1 - F(x))^(M-1)`.
pub fn min_order_pdf(x: f64, m_devices: usize, scale: LinkScale) -> Result<f64> {
    if m_devices == 0 {
        return Err(Error::InvalidParameter {
            name: "m_devices",
            value: 0.0,
            constraint: "must be at least 1",
        });
    }
    let f = gamma_pdf(x, scale)?;
    let sf = gamma_sf(x, scale)?;
    Ok(m_devices as f64 * f * sf.powi(m_devices as i32 - 1))
}
