//! Runs an [`ExperimentConfig`] and renders the result as CSV.

use std::fmt::Write as _;
use std::path::Path;

use crate::analysis::{p_e0_evt, p_e0_exact, p_e0_high_snr, t_terms_wpt};
use crate::channel::SystemParams;
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::montecarlo::{derive_seed, Engine, Metric, Scheme};

pub const CSV_HEADER: &str = "scheme,source,m_devices,alpha,power_dbm,power_ratio,metric,value,ci_half_width,trials,seed";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scheme: Scheme,
    /// `mc`, `e0_exact`, `e0_high_snr`, `e0_evt` or `t_sum`.
    pub source: &'static str,
    pub m_devices: usize,
    pub alpha: f64,
    pub power_dbm: f64,
    pub power_ratio: f64,
    pub metric: Metric,
    pub value: f64,
    pub ci_half_width: f64,
    /// 0 for analytic rows.
    pub trials: u64,
    /// 0 for analytic rows.
    pub seed: u64,
}

impl Row {
    fn analytic(scheme: Scheme, source: &'static str, m: usize, alpha: f64, dbm: f64, ratio: f64, value: f64) -> Self {
        Row {
            scheme,
            source,
            m_devices: m,
            alpha,
            power_dbm: dbm,
            power_ratio: ratio,
            metric: Metric::Outage,
            value,
            ci_half_width: 0.0,
            trials: 0,
            seed: 0,
        }
    }
}

/// Executes every `(scheme, M, alpha)` curve of the config plus the
/// requested analytic overlays.
///
/// Curve `k` (in scheme, M, alpha order) uses seed `derive_seed(seed, k)`
/// and its points are seeded from that in turn.
pub fn run(config: &ExperimentConfig, engine: &Engine) -> Result<Vec<Row>> {
    let violations = config.validate();
    if !violations.is_empty() {
        let msg = violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
        return Err(Error::InvalidInput(msg));
    }
    let dbm = config.power_dbm_range.points();
    let ratios: Vec<f64> = dbm.iter().map(|&d| config.power_ratio(d)).collect();
    let overlays = config.analytic_overlays;
    let mut rows = Vec::new();
    let mut curve = 0u64;
    for &scheme in &config.schemes {
        for &m in &config.m_devices {
            for &alpha in &config.alpha {
                let params = SystemParams::new(config.scenario(m, alpha))?;
                let seed = derive_seed(config.seed, curve);
                curve += 1;
                let points = engine.sweep(scheme, &params, &ratios, config.metric, config.trials, seed)?;
                for (i, pt) in points.iter().enumerate() {
                    rows.push(Row {
                        scheme,
                        source: "mc",
                        m_devices: m,
                        alpha,
                        power_dbm: dbm[i],
                        power_ratio: pt.power_ratio,
                        metric: config.metric,
                        value: pt.metric,
                        ci_half_width: pt.ci_half_width,
                        trials: config.trials,
                        seed: derive_seed(seed, i as u64),
                    });
                }
                match scheme {
                    Scheme::Bac => {
                        let high = if overlays.e0_high_snr { Some(p_e0_high_snr(&params)?) } else { None };
                        let evt = if overlays.e0_evt && m >= 3 { Some(p_e0_evt(&params)?) } else { None };
                        for (i, &p) in ratios.iter().enumerate() {
                            if overlays.e0_exact {
                                let v = p_e0_exact(&params, p)?;
                                rows.push(Row::analytic(scheme, "e0_exact", m, alpha, dbm[i], p, v));
                            }
                            if let Some(v) = high {
                                rows.push(Row::analytic(scheme, "e0_high_snr", m, alpha, dbm[i], p, v));
                            }
                            if let Some(v) = evt {
                                rows.push(Row::analytic(scheme, "e0_evt", m, alpha, dbm[i], p, v));
                            }
                        }
                    }
                    Scheme::Wpt => {
                        if overlays.t_terms {
                            for (i, &p) in ratios.iter().enumerate() {
                                let v = t_terms_wpt(&params, p)?.total();
                                rows.push(Row::analytic(scheme, "t_sum", m, alpha, dbm[i], p, v));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text: a `# nhs <version>` line, the header, then one line per row.
pub fn to_csv(rows: &[Row]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# nhs {}", env!("CARGO_PKG_VERSION"));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.scheme.name(),
            r.source,
            r.m_devices,
            float(r.alpha),
            float(r.power_dbm),
            float(r.power_ratio),
            r.metric.name(),
            float(r.value),
            float(r.ci_half_width),
            r.trials,
            r.seed
        );
    }
    s
}

pub fn write_csv(rows: &[Row], path: &Path) -> std::io::Result<()> {
    std::fs::write(path, to_csv(rows))
}
