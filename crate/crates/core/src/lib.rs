//! Link-level simulation and analysis of two energy-cooperative uplink NOMA
//! schemes: wireless-power-transfer NOMA with hybrid SIC (`wpt`) and
//! backscatter NOMA (`bac`).
//!
//! The crate is layered bottom-up:
//!
//! * [`specfun`] – modified Bessel K0/K1 and both real Lambert W branches.
//! * [`quad`] – adaptive Gauss–Kronrod quadrature used by the analysis layer.
//! * [`channel`] – scenario parameters, channel sampling and the
//!   distribution of the cascaded gain `|g|^2 |h|^2`.
//! * [`wpt`], [`bac`] – per-realization rates, scheduling and outage events.
//! * [`analysis`] – error floors, order-statistic integrals and slope fits.
//! * [`montecarlo`] – reproducible parallel trial engine.
//! * [`config`], [`experiment`] – the experiment runner behind the `nhs` CLI.

pub mod analysis;
pub mod bac;
pub mod channel;
pub mod config;
mod error;
pub mod experiment;
pub mod montecarlo;
pub mod quad;
pub mod specfun;
pub mod wpt;

pub use error::{Error, Result};

pub use analysis::{CurvePoint, SlopeFit};
pub use channel::{ChannelRealization, LinkScale, Scenario, SystemParams};
pub use montecarlo::{Engine, Metric, OutageEstimate, RateEstimate, Scheme};
pub use wpt::{ScheduleDecision, SicStage};
