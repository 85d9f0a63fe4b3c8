//! Reproducible parallel Monte Carlo engine.
//!
//! Trial `i` under seed `s` always draws from its own SplitMix64 stream
//! seeded by a hash of `(s, i)`. Trials are grouped into fixed-size chunks,
//! chunks run on a rayon pool and are reduced in index order, so estimates
//! are a function of `(inputs, seed)` only and never of the worker count.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::analysis::CurvePoint;
use crate::bac::{admission_set_size, schedule_bac};
use crate::channel::{ChannelRealization, SystemParams};
use crate::error::{Error, Result};
use crate::wpt::{schedule_wpt, ScheduleDecision};

/// Trials per work unit.
const CHUNK: u64 = 1 << 14;
const Z95: f64 = 1.959_963_984_540_054;
/// Below this many failures the Wilson interval replaces the normal one.
const WILSON_BELOW: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Wpt,
    Bac,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Wpt => "wpt",
            Scheme::Bac => "bac",
        }
    }

    pub fn schedule(&self, params: &SystemParams, real: &ChannelRealization, p: f64) -> Result<ScheduleDecision> {
        match self {
            Scheme::Wpt => schedule_wpt(params, real, p),
            Scheme::Bac => schedule_bac(params, real, p),
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wpt" => Ok(Scheme::Wpt),
            "bac" => Ok(Scheme::Bac),
            other => Err(Error::InvalidInput(format!("unknown scheme '{other}' (expected wpt or bac)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Outage,
    ErgodicRate,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::ErgodicRate => "ergodic_rate",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "outage" => Ok(Metric::Outage),
            "ergodic_rate" => Ok(Metric::ErgodicRate),
            other => Err(Error::InvalidInput(format!(
                "unknown metric '{other}' (expected outage or ergodic_rate)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub trials: u64,
    pub failures: u64,
    pub p_hat: f64,
    /// 95% half-width: normal approximation, or Wilson with fewer than 30
    /// failures.
    pub ci_half_width: f64,
    pub seed: u64,
}

impl OutageEstimate {
    pub fn from_counts(failures: u64, trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 || failures > trials {
            return Err(Error::InvalidInput(format!(
                "need 0 <= failures <= trials and trials >= 1, got {failures}/{trials}"
            )));
        }
        let n = trials as f64;
        let p = failures as f64 / n;
        let ci_half_width = if failures < WILSON_BELOW {
            let z2 = Z95 * Z95;
            Z95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
        } else {
            Z95 * (p * (1.0 - p) / n).sqrt()
        };
        Ok(OutageEstimate {
            trials,
            failures,
            p_hat: p,
            ci_half_width,
            seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub trials: u64,
    pub mean_rate: f64,
    pub std_error: f64,
    pub seed: u64,
}

/// BAC trials tagged by which outage event occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct BacEvents {
    pub trials: u64,
    pub seed: u64,
    /// No device admissible.
    pub e0: u64,
    /// A device was admitted but missed `rs`.
    pub admitted_outage: u64,
    /// `set_size[k]` counts trials with exactly `k` admissible devices.
    pub set_size: Vec<u64>,
    /// `admitted_outage_by_size[k]`: admitted-device outages with `k`
    /// admissible devices (index 0 is always zero).
    pub admitted_outage_by_size: Vec<u64>,
}

impl BacEvents {
    pub fn outage(&self) -> Result<OutageEstimate> {
        OutageEstimate::from_counts(self.e0 + self.admitted_outage, self.trials, self.seed)
    }

    pub fn e0_estimate(&self) -> Result<OutageEstimate> {
        OutageEstimate::from_counts(self.e0, self.trials, self.seed)
    }

    /// Joint probability of admission followed by a rate miss.
    pub fn admitted_outage_estimate(&self) -> Result<OutageEstimate> {
        OutageEstimate::from_counts(self.admitted_outage, self.trials, self.seed)
    }

    /// Outage probability conditioned on at least one admissible device.
    pub fn conditional_outage(&self) -> Result<OutageEstimate> {
        OutageEstimate::from_counts(self.admitted_outage, self.trials - self.e0, self.seed)
    }

    fn merge(&mut self, other: &BacEvents) {
        self.trials += other.trials;
        self.e0 += other.e0;
        self.admitted_outage += other.admitted_outage;
        for (a, b) in self.set_size.iter_mut().zip(&other.set_size) {
            *a += b;
        }
        for (a, b) in self.admitted_outage_by_size.iter_mut().zip(&other.admitted_outage_by_size) {
            *a += b;
        }
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for point `index` of a sweep run under `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(0x6a09_e667_f3bc_c909)))
}

/// Random stream of trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(mix64(seed.wrapping_add(mix64(trial ^ 0x9e37_79b9_7f4a_7c15))))
}

fn check_run(p: f64, trials: u64) -> Result<()> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter {
            name: "transmit_snr",
            value: p,
            constraint: "must be positive and finite",
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: 0.0,
            constraint: "must be at least 1",
        });
    }
    Ok(())
}

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub struct Engine {
    pool: rayon::ThreadPool,
}

impl Engine {
    /// Pool with `threads` workers, or rayon's default when `None`.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            if n == 0 {
                return Err(Error::InvalidParameter {
                    name: "threads",
                    value: 0.0,
                    constraint: "must be at least 1",
                });
            }
            b = b.num_threads(n);
        }
        let pool = b
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
        Ok(Engine { pool })
    }

    /// Pool sized by `NHS_THREADS` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var("NHS_THREADS") {
            Ok(v) => {
                let n = v
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("NHS_THREADS must be a positive integer, got '{v}'")))?;
                Engine::new(Some(n))
            }
            Err(_) => Engine::new(None),
        }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `body` over every chunk of `trials` and returns per-chunk results
    /// in chunk order.
    fn chunks<T, F>(&self, trials: u64, body: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, u64) -> Result<T> + Sync,
    {
        let n_chunks = trials.div_ceil(CHUNK);
        self.pool.install(|| {
            (0..n_chunks)
                .into_par_iter()
                .map(|c| {
                    let start = c * CHUNK;
                    body(start, (start + CHUNK).min(trials))
                })
                .collect()
        })
    }

    pub fn estimate_outage(
        &self,
        scheme: Scheme,
        params: &SystemParams,
        p: f64,
        trials: u64,
        seed: u64,
    ) -> Result<OutageEstimate> {
        check_run(p, trials)?;
        let counts = self.chunks(trials, |start, end| {
            let mut real = ChannelRealization {
                h0_sq: 0.0,
                gamma: Vec::with_capacity(params.m_devices()),
                s0_sq: 0.0,
            };
            let mut failures = 0u64;
            for t in start..end {
                real.resample(params, &mut trial_rng(seed, t));
                if scheme.schedule(params, &real, p)?.is_outage(params.rs()) {
                    failures += 1;
                }
            }
            Ok(failures)
        })?;
        OutageEstimate::from_counts(counts.iter().sum(), trials, seed)
    }

    /// Mean rate of the scheduled delay-tolerant device, counting 0 when
    /// nobody is admitted.
    pub fn estimate_ergodic_rate(
        &self,
        scheme: Scheme,
        params: &SystemParams,
        p: f64,
        trials: u64,
        seed: u64,
    ) -> Result<RateEstimate> {
        check_run(p, trials)?;
        let sums = self.chunks(trials, |start, end| {
            let mut real = ChannelRealization {
                h0_sq: 0.0,
                gamma: Vec::with_capacity(params.m_devices()),
                s0_sq: 0.0,
            };
            let (mut s, mut s2) = (Neumaier::default(), Neumaier::default());
            for t in start..end {
                real.resample(params, &mut trial_rng(seed, t));
                let r = scheme.schedule(params, &real, p)?.achieved_rate;
                s.add(r);
                s2.add(r * r);
            }
            Ok((s.value(), s2.value()))
        })?;
        let (mut s, mut s2) = (Neumaier::default(), Neumaier::default());
        for (a, b) in sums {
            s.add(a);
            s2.add(b);
        }
        let n = trials as f64;
        let mean = s.value() / n;
        let var = if trials > 1 {
            ((s2.value() - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Ok(RateEstimate {
            trials,
            mean_rate: mean,
            std_error: (var / n).sqrt(),
            seed,
        })
    }

    /// BAC outage split into the empty-admission event and the
    /// admitted-device rate miss, with the admission-set size histogram.
    pub fn bac_events(&self, params: &SystemParams, p: f64, trials: u64, seed: u64) -> Result<BacEvents> {
        check_run(p, trials)?;
        let m = params.m_devices();
        let empty = |trials| BacEvents {
            trials,
            seed,
            e0: 0,
            admitted_outage: 0,
            set_size: vec![0; m + 1],
            admitted_outage_by_size: vec![0; m + 1],
        };
        let parts = self.chunks(trials, |start, end| {
            let mut ev = empty(end - start);
            let mut real = ChannelRealization {
                h0_sq: 0.0,
                gamma: Vec::with_capacity(m),
                s0_sq: 0.0,
            };
            for t in start..end {
                real.resample(params, &mut trial_rng(seed, t));
                let k = admission_set_size(params, &real, p);
                ev.set_size[k] += 1;
                if k == 0 {
                    ev.e0 += 1;
                } else if schedule_bac(params, &real, p)?.is_outage(params.rs()) {
                    ev.admitted_outage += 1;
                    ev.admitted_outage_by_size[k] += 1;
                }
            }
            Ok(ev)
        })?;
        let mut total = empty(0);
        for part in &parts {
            total.merge(part);
        }
        Ok(total)
    }

    /// One point per power, point `i` seeded with `derive_seed(seed, i)`.
    pub fn sweep(
        &self,
        scheme: Scheme,
        params: &SystemParams,
        powers: &[f64],
        metric: Metric,
        trials: u64,
        seed: u64,
    ) -> Result<Vec<CurvePoint>> {
        if powers.is_empty() {
            return Err(Error::InvalidInput("power sweep is empty".into()));
        }
        if powers.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("sweep powers must be strictly increasing".into()));
        }
        powers
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let s = derive_seed(seed, i as u64);
                match metric {
                    Metric::Outage => {
                        let e = self.estimate_outage(scheme, params, p, trials, s)?;
                        Ok(CurvePoint {
                            power_ratio: p,
                            metric: e.p_hat,
                            ci_half_width: e.ci_half_width,
                        })
                    }
                    Metric::ErgodicRate => {
                        let e = self.estimate_ergodic_rate(scheme, params, p, trials, s)?;
                        Ok(CurvePoint {
                            power_ratio: p,
                            metric: e.mean_rate,
                            ci_half_width: Z95 * e.std_error,
                        })
                    }
                }
            })
            .collect()
    }
}

fn global() -> Result<&'static Engine> {
    static ENGINE: OnceLock<Engine> = OnceLock::new();
    if let Some(e) = ENGINE.get() {
        return Ok(e);
    }
    let e = Engine::from_env()?;
    Ok(ENGINE.get_or_init(|| e))
}

/// [`Engine::estimate_outage`] on a shared engine sized by `NHS_THREADS`.
pub fn estimate_outage(scheme: Scheme, params: &SystemParams, p: f64, trials: u64, seed: u64) -> Result<OutageEstimate> {
    global()?.estimate_outage(scheme, params, p, trials, seed)
}

/// [`Engine::estimate_ergodic_rate`] on the shared engine.
pub fn estimate_ergodic_rate(
    scheme: Scheme,
    params: &SystemParams,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<RateEstimate> {
    global()?.estimate_ergodic_rate(scheme, params, p, trials, seed)
}

/// [`Engine::sweep`] on the shared engine.
pub fn sweep(
    scheme: Scheme,
    params: &SystemParams,
    powers: &[f64],
    metric: Metric,
    trials: u64,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    global()?.sweep(scheme, params, powers, metric, trials, seed)
}
