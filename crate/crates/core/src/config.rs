//! Experiment configuration: flat `key = value` files and the figure presets.
//!
//! ```text
//! # comment
//! schemes = wpt, bac
//! m_devices = 1, 2, 3
//! power_dbm_range = 0, 50, 5
//! ```
//!
//! List-valued keys take comma-separated values. Unknown keys are errors.

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::channel::{Scenario, SystemParams};
use crate::montecarlo::{Metric, Scheme};

pub const PRESETS: [&str; 6] = ["fig1a", "fig1b", "fig2a", "fig2b", "fig3", "fig4"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Overlays {
    pub e0_exact: bool,
    pub e0_high_snr: bool,
    pub e0_evt: bool,
    pub t_terms: bool,
}

impl Overlays {
    pub fn any(&self) -> bool {
        self.e0_exact || self.e0_high_snr || self.e0_evt || self.t_terms
    }

    fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.e0_exact {
            v.push("e0_exact");
        }
        if self.e0_high_snr {
            v.push("e0_high_snr");
        }
        if self.e0_evt {
            v.push("e0_evt");
        }
        if self.t_terms {
            v.push("t_terms");
        }
        v
    }
}

/// Inclusive transmit-power grid in dBm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl PowerRange {
    /// `start, start + step, ...` up to and including `stop` (within
    /// rounding).
    pub fn points(&self) -> Vec<f64> {
        if !(self.step > 0.0) || !(self.stop > self.start) {
            return vec![self.start];
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub schemes: Vec<Scheme>,
    pub m_devices: Vec<usize>,
    pub alpha: Vec<f64>,
    pub beta: f64,
    pub eta: f64,
    pub r0: f64,
    pub rs: f64,
    pub phi: f64,
    pub d0: f64,
    pub dh: f64,
    pub dg: f64,
    pub power_dbm_range: PowerRange,
    pub noise_dbm: f64,
    pub trials: u64,
    pub seed: u64,
    pub metric: Metric,
    pub analytic_overlays: Overlays,
    pub output_path: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schemes: vec![Scheme::Wpt, Scheme::Bac],
            m_devices: vec![1],
            alpha: vec![0.5],
            beta: 0.1,
            eta: 0.1,
            r0: 0.1,
            rs: 1.2,
            phi: 3.5,
            d0: 50.0,
            dh: 50.0,
            dg: 5.0,
            power_dbm_range: PowerRange {
                start: 0.0,
                stop: 50.0,
                step: 5.0,
            },
            noise_dbm: -94.0,
            trials: 1_000_000,
            seed: 1,
            metric: Metric::Outage,
            analytic_overlays: Overlays::default(),
            output_path: None,
        }
    }
}

/// One failed constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub key: String,
    pub value: String,
    pub constraint: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}: {}", self.key, self.value, self.constraint)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: key `{key}`: {message}")]
    Value { line: usize, key: String, message: String },
    #[error("invalid configuration:\n{}", .0.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),
    #[error("unknown preset `{0}` (expected one of fig1a, fig1b, fig2a, fig2b, fig3, fig4)")]
    UnknownPreset(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn push(out: &mut Vec<Violation>, key: &str, value: String, constraint: &str) {
    out.push(Violation {
        key: key.to_string(),
        value,
        constraint: constraint.to_string(),
    });
}

fn list<T>(v: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    let items: Vec<&str> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err("expected at least one value".into());
    }
    items.into_iter().map(item).collect()
}

fn real(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("'{s}' is not a number"))
}

fn integer<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse::<T>().map_err(|_| format!("'{s}' is not a nonnegative integer"))
}

impl ExperimentConfig {
    /// Parses a flat config. Keys that are absent keep their defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("expected `key = value`, got '{content}'"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            cfg.set(key, value).map_err(|message| ConfigError::Value {
                line,
                key: key.to_string(),
                message,
            })?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "schemes" => self.schemes = list(v, |s| s.parse::<Scheme>().map_err(|e| e.to_string()))?,
            "m_devices" => self.m_devices = list(v, integer)?,
            "alpha" => self.alpha = list(v, real)?,
            "beta" => self.beta = real(v)?,
            "eta" => self.eta = real(v)?,
            "r0" => self.r0 = real(v)?,
            "rs" => self.rs = real(v)?,
            "phi" => self.phi = real(v)?,
            "d0" => self.d0 = real(v)?,
            "dh" => self.dh = real(v)?,
            "dg" => self.dg = real(v)?,
            "power_dbm_range" => {
                let r = list(v, real)?;
                let [start, stop, step] = r[..] else {
                    return Err("expected `start, stop, step`".into());
                };
                self.power_dbm_range = PowerRange { start, stop, step };
            }
            "noise_dbm" => self.noise_dbm = real(v)?,
            "trials" => self.trials = integer(v)?,
            "seed" => self.seed = integer(v)?,
            "metric" => self.metric = v.parse::<Metric>().map_err(|e| e.to_string())?,
            "analytic_overlays" => {
                let mut o = Overlays::default();
                if !matches!(v, "" | "none") {
                    for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        match name {
                            "e0_exact" => o.e0_exact = true,
                            "e0_high_snr" => o.e0_high_snr = true,
                            "e0_evt" => o.e0_evt = true,
                            "t_terms" => o.t_terms = true,
                            other => return Err(format!("unknown overlay '{other}'")),
                        }
                    }
                }
                self.analytic_overlays = o;
            }
            "output_path" => self.output_path = if v.is_empty() { None } else { Some(PathBuf::from(v)) },
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Scenario for one `(M, alpha)` combination.
    pub fn scenario(&self, m_devices: usize, alpha: f64) -> Scenario {
        Scenario {
            m_devices,
            alpha,
            beta: self.beta,
            eta: self.eta,
            r0: self.r0,
            rs: self.rs,
            phi: self.phi,
            d0: self.d0,
            dh: self.dh,
            dg: self.dg,
        }
    }

    /// Every constraint the config breaks; empty when it is runnable.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.schemes.is_empty() {
            push(&mut out, "schemes", String::new(), "at least one of wpt, bac");
        }
        if self.m_devices.is_empty() {
            push(&mut out, "m_devices", String::new(), "at least one value");
        }
        for &m in &self.m_devices {
            if m == 0 {
                push(&mut out, "m_devices", m.to_string(), "must be at least 1");
            }
        }
        if self.alpha.is_empty() {
            push(&mut out, "alpha", String::new(), "at least one value");
        }
        for &a in &self.alpha {
            if !(a > 0.0 && a < 1.0) {
                push(&mut out, "alpha", a.to_string(), "alpha must lie in (0,1)");
            }
        }
        let positive = [
            ("phi", self.phi),
            ("d0", self.d0),
            ("dh", self.dh),
            ("dg", self.dg),
            ("r0", self.r0),
        ];
        for (k, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                push(&mut out, k, v.to_string(), "must be positive and finite");
            }
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            push(&mut out, "beta", self.beta.to_string(), "beta must lie in (0,1]");
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            push(&mut out, "eta", self.eta.to_string(), "eta must lie in (0,1]");
        }
        if !(self.rs.is_finite() && self.rs >= 0.0) {
            push(&mut out, "rs", self.rs.to_string(), "must be nonnegative and finite");
        }
        let r = self.power_dbm_range;
        let shown = format!("{}, {}, {}", r.start, r.stop, r.step);
        if !(r.start.is_finite() && r.stop.is_finite() && r.step.is_finite()) {
            push(&mut out, "power_dbm_range", shown.clone(), "all three values must be finite");
        }
        if !(r.start < r.stop) {
            push(&mut out, "power_dbm_range", shown.clone(), "start must be below stop");
        }
        if !(r.step > 0.0) {
            push(&mut out, "power_dbm_range", shown, "step must be positive");
        }
        if !self.noise_dbm.is_finite() {
            push(&mut out, "noise_dbm", self.noise_dbm.to_string(), "must be finite");
        }
        if self.trials == 0 {
            push(&mut out, "trials", "0".into(), "must be at least 1");
        }
        if self.analytic_overlays.any() && self.metric != Metric::Outage {
            push(&mut out, 
                "analytic_overlays",
                self.analytic_overlays.names().join(", "),
                "overlays are outage probabilities and need metric = outage",
            );
        }
        // Cross-field checks the scenario constructor enforces (e.g. derived
        // thresholds overflowing for extreme rates).
        if out.is_empty() {
            for &m in &self.m_devices {
                for &a in &self.alpha {
                    if let Err(e) = SystemParams::new(self.scenario(m, a)) {
                        push(&mut out, "scenario", format!("m_devices = {m}, alpha = {a}"), &e.to_string());
                    }
                }
            }
        }
        out
    }

    /// Built-in figure setups.
    pub fn preset(name: &str) -> Result<Self, ConfigError> {
        let base = ExperimentConfig::default();
        let cfg = match name {
            "fig1a" => ExperimentConfig {
                m_devices: vec![1, 2, 3],
                analytic_overlays: Overlays {
                    t_terms: true,
                    ..Overlays::default()
                },
                ..base
            },
            "fig1b" => ExperimentConfig {
                m_devices: vec![1, 2, 3],
                r0: 2.0,
                power_dbm_range: PowerRange {
                    start: 0.0,
                    stop: 70.0,
                    step: 5.0,
                },
                trials: 10_000_000,
                analytic_overlays: Overlays {
                    t_terms: true,
                    ..Overlays::default()
                },
                ..base
            },
            "fig2a" | "fig2b" => ExperimentConfig {
                m_devices: vec![5],
                r0: 2.0,
                rs: 3.0,
                d0: 10.0,
                dh: 10.0,
                metric: if name == "fig2a" { Metric::Outage } else { Metric::ErgodicRate },
                ..base
            },
            "fig3" => ExperimentConfig {
                m_devices: vec![1, 3, 5],
                d0: 100.0,
                dh: 100.0,
                dg: 1.0,
                power_dbm_range: PowerRange {
                    start: 0.0,
                    stop: 70.0,
                    step: 5.0,
                },
                trials: 10_000_000,
                analytic_overlays: Overlays {
                    e0_exact: true,
                    e0_high_snr: true,
                    e0_evt: true,
                    t_terms: false,
                },
                ..base
            },
            "fig4" => ExperimentConfig {
                schemes: vec![Scheme::Wpt],
                m_devices: vec![5],
                alpha: vec![0.1, 0.3, 0.5, 0.7, 0.9],
                rs: 2.0,
                ..base
            },
            other => return Err(ConfigError::UnknownPreset(other.to_string())),
        };
        Ok(cfg)
    }

    /// Transmit-to-noise power ratio for a transmit power in dBm.
    pub fn power_ratio(&self, power_dbm: f64) -> f64 {
        10f64.powf((power_dbm - self.noise_dbm) / 10.0)
    }

    /// Serializes back to the flat format; `parse(to_text())` round-trips.
    pub fn to_text(&self) -> String {
        let join = |v: Vec<String>| v.join(", ");
        let overlays = self.analytic_overlays.names();
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("schemes", join(self.schemes.iter().map(|x| x.name().to_string()).collect()));
        kv("m_devices", join(self.m_devices.iter().map(|x| x.to_string()).collect()));
        kv("alpha", join(self.alpha.iter().map(|x| x.to_string()).collect()));
        kv("beta", self.beta.to_string());
        kv("eta", self.eta.to_string());
        kv("r0", self.r0.to_string());
        kv("rs", self.rs.to_string());
        kv("phi", self.phi.to_string());
        kv("d0", self.d0.to_string());
        kv("dh", self.dh.to_string());
        kv("dg", self.dg.to_string());
        let r = self.power_dbm_range;
        kv("power_dbm_range", format!("{}, {}, {}", r.start, r.stop, r.step));
        kv("noise_dbm", self.noise_dbm.to_string());
        kv("trials", self.trials.to_string());
        kv("seed", self.seed.to_string());
        kv("metric", self.metric.name().to_string());
        kv(
            "analytic_overlays",
            if overlays.is_empty() { "none".into() } else { overlays.join(", ") },
        );
        if let Some(p) = &self.output_path {
            kv("output_path", p.display().to_string());
        }
        s
    }
}
