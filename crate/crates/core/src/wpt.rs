//! Wireless-powered NOMA: the delay-tolerant devices harvest energy from the
//! delay-sensitive device's signal during the first `alpha` fraction of the
//! block and then one of them shares the channel with it.

use crate::channel::{ChannelRealization, SystemParams};
use crate::error::{Error, Result};

/// Where the admitted device's signal is decoded in the successive
/// interference cancellation chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SicStage {
    /// Decoded before the delay-sensitive signal.
    First,
    /// Decoded after the delay-sensitive signal has been removed.
    Second,
    /// No device was admitted.
    NotAdmitted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleDecision {
    /// Index into the realization's (unsorted) gain vector.
    pub admitted: Option<usize>,
    pub sic_stage: SicStage,
    /// Rate of the admitted device in bits/channel use; 0 when nobody is
    /// admitted.
    pub achieved_rate: f64,
}

impl ScheduleDecision {
    pub fn not_admitted() -> Self {
        ScheduleDecision {
            admitted: None,
            sic_stage: SicStage::NotAdmitted,
            achieved_rate: 0.0,
        }
    }

    pub fn is_outage(&self, target_rate: f64) -> bool {
        self.admitted.is_none() || self.achieved_rate < target_rate
    }
}

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

/// Threshold on the cascaded gain: the delay-sensitive device still reaches
/// `r0` when decoded first iff `gamma <= tau`. Devices above it must be
/// decoded first.
pub fn tau(params: &SystemParams, h0_sq: f64, p: f64) -> f64 {
    let k = params.eta() * params.bar_alpha();
    (h0_sq / (params.bar_eps0() * k) - 1.0 / (k * p)).max(0.0)
}

/// Rate of a device decoded first, treating the delay-sensitive signal as noise.
pub fn rate_wp1(params: &SystemParams, gamma: f64, h0_sq: f64, p: f64) -> f64 {
    let sig = params.eta() * p * params.bar_alpha() * gamma;
    (1.0 - params.alpha()) * (sig / (p * h0_sq + 1.0)).ln_1p() / std::f64::consts::LN_2
}

/// Rate of the delay-sensitive device when a device with gain `gamma` is
/// decoded after it.
pub fn rate_wp0(params: &SystemParams, gamma: f64, h0_sq: f64, p: f64) -> f64 {
    let interference = params.eta() * p * params.bar_alpha() * gamma;
    (1.0 - params.alpha()) * (p * h0_sq / (interference + 1.0)).ln_1p() / std::f64::consts::LN_2
}

/// Interference-free rate of a device decoded second.
pub fn rate_wp2(params: &SystemParams, gamma: f64, p: f64) -> f64 {
    let sig = params.eta() * p * params.bar_alpha() * gamma;
    (1.0 - params.alpha()) * sig.ln_1p() / std::f64::consts::LN_2
}

fn sinr1(params: &SystemParams, gamma: f64, h0_sq: f64, p: f64) -> f64 {
    params.eta() * p * params.bar_alpha() * gamma / (p * h0_sq + 1.0)
}

fn snr2(params: &SystemParams, gamma: f64, p: f64) -> f64 {
    params.eta() * p * params.bar_alpha() * gamma
}

/// Picks the device with the largest achievable rate. Devices above `tau`
/// are decoded first, the rest second; ties go to the lower index and
/// `gamma == tau` counts as second-stage.
pub fn schedule_wpt(params: &SystemParams, real: &ChannelRealization, p: f64) -> Result<ScheduleDecision> {
    check_power(p)?;
    if real.gamma.is_empty() {
        return Ok(ScheduleDecision::not_admitted());
    }
    let t = tau(params, real.h0_sq, p);
    let mut best: Option<(usize, SicStage, f64)> = None;
    for (i, &g) in real.gamma.iter().enumerate() {
        let (stage, arg) = if g > t {
            (SicStage::First, sinr1(params, g, real.h0_sq, p))
        } else {
            (SicStage::Second, snr2(params, g, p))
        };
        if best.map_or(true, |(_, _, b)| arg > b) {
            best = Some((i, stage, arg));
        }
    }
    let (i, stage, arg) = best.expect("at least one device");
    Ok(ScheduleDecision {
        admitted: Some(i),
        sic_stage: stage,
        achieved_rate: (1.0 - params.alpha()) * arg.ln_1p() / std::f64::consts::LN_2,
    })
}

/// Whether the scheduled device misses `rs` in this realization.
pub fn wpt_outage(params: &SystemParams, real: &ChannelRealization, p: f64) -> Result<bool> {
    Ok(schedule_wpt(params, real, p)?.is_outage(params.rs()))
}
