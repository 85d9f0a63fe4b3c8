//! Backscatter-assisted NOMA: the admitted device reflects the delay-sensitive
//! device's signal, so its symbol always rides on `s0` and is decoded second.

use crate::channel::{ChannelRealization, SystemParams};
use crate::error::{Error, Result};
use crate::wpt::{ScheduleDecision, SicStage};

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

/// Admission threshold on the cascaded gain. May be negative, in which case
/// no device is admissible.
pub fn theta(params: &SystemParams, h0_sq: f64, p: f64) -> f64 {
    let b2 = params.beta() * params.beta();
    h0_sq / (b2 * params.eps0()) - 1.0 / (b2 * p)
}

/// Rate of the delay-sensitive device, with the reflected signal as interference.
pub fn rate_bac0(params: &SystemParams, h0_sq: f64, gamma: f64, p: f64) -> f64 {
    let b2 = params.beta() * params.beta();
    (p * h0_sq / (p * b2 * gamma + 1.0)).ln_1p() / std::f64::consts::LN_2
}

/// Rate of the backscatter device once `s0` has been removed.
pub fn rate_bacm(params: &SystemParams, gamma: f64, s0_sq: f64, p: f64) -> f64 {
    let b2 = params.beta() * params.beta();
    (p * b2 * gamma * s0_sq).ln_1p() / std::f64::consts::LN_2
}

/// Number of devices with `gamma <= theta`.
pub fn admission_set_size(params: &SystemParams, real: &ChannelRealization, p: f64) -> usize {
    let th = theta(params, real.h0_sq, p);
    real.gamma.iter().filter(|&&g| g <= th).count()
}

/// Admits the strongest device among those that keep the delay-sensitive
/// device at `r0`.
pub fn schedule_bac(params: &SystemParams, real: &ChannelRealization, p: f64) -> Result<ScheduleDecision> {
    check_power(p)?;
    let th = theta(params, real.h0_sq, p);
    let mut best: Option<(usize, f64)> = None;
    for (i, &g) in real.gamma.iter().enumerate() {
        if g <= th && best.map_or(true, |(_, b)| g > b) {
            best = Some((i, g));
        }
    }
    Ok(match best {
        None => ScheduleDecision::not_admitted(),
        Some((i, g)) => ScheduleDecision {
            admitted: Some(i),
            sic_stage: SicStage::Second,
            achieved_rate: rate_bacm(params, g, real.s0_sq, p),
        },
    })
}

pub fn bac_outage(params: &SystemParams, real: &ChannelRealization, p: f64) -> Result<bool> {
    Ok(schedule_bac(params, real, p)?.is_outage(params.rs()))
}
