//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use nhs_core::analysis::{fit_diversity_slope, p_e0_evt, p_e0_exact, p_e0_high_snr, t_terms_wpt};
use nhs_core::channel::{gamma_cdf, gamma_pdf};
use nhs_core::config::ExperimentConfig;
use nhs_core::quad::{integrate_to_infinity, Tolerance};
use nhs_core::specfun::{bessel_k0, bessel_k1, lambert_w, BranchW, BRANCH_POINT};
use nhs_core::{CurvePoint, Engine, LinkScale, Metric, Scenario, Scheme, SystemParams};

// Pinned tolerances.
const SLOPE_TOL_WPT: f64 = 0.5;
const WPT_FLOOR_REL: f64 = 0.10;
const BAC_FLOOR_CIS: f64 = 3.0;
const E0_HIGH_SNR_ABS: f64 = 1e-4;
const BAC_CAP_SLOPE: (f64, f64) = (-1.35, -0.65);
const SIGMAS: f64 = 3.0;
const RESIDUAL_TOL: f64 = 1e-12;
const BESSEL_REL_TOL: f64 = 1e-10;
const CDF_PDF_REL_TOL: f64 = 1e-6;
const PDF_NORM_TOL: f64 = 1e-8;

const TRIALS_SLOPE: u64 = 10_000_000;
const TRIALS_FLOOR: u64 = 10_000_000;
const TRIALS_FIG: u64 = 1_000_000;
const SEED: u64 = 20_240_601;

type Check = Result<String, String>;

fn unit(m: usize, r0: f64, rs: f64) -> SystemParams {
    SystemParams::new(Scenario {
        m_devices: m,
        r0,
        rs,
        ..Scenario::default()
    })
    .expect("valid scenario")
}

fn preset(name: &str, m: usize, alpha: f64) -> (ExperimentConfig, SystemParams) {
    let cfg = ExperimentConfig::preset(name).expect("known preset");
    let p = SystemParams::new(cfg.scenario(m, alpha)).expect("valid preset scenario");
    (cfg, p)
}

fn err(e: nhs_core::Error) -> String {
    e.to_string()
}

/// Power at which the analytic WPT outage falls to `target`, by bisection in
/// log10 power.
fn power_for_outage(p: &SystemParams, target: f64) -> Result<f64, String> {
    let (mut lo, mut hi) = (0.0f64, 30.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if t_terms_wpt(p, 10f64.powf(mid)).map_err(err)?.total() > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(10f64.powf(0.5 * (lo + hi)))
}

/// Five powers spanning the decade that ends at `top`, 2.5 dB apart.
fn top_decade(top: f64) -> Vec<f64> {
    (0..=4).map(|k| top * 10f64.powf(-1.0 + 0.25 * k as f64)).collect()
}

fn c1_wpt_diversity(e: &Engine) -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for m in 1..=3 {
        let p = unit(m, 0.1, 1.2);
        if !p.full_diversity_condition() {
            return Err("condition for full diversity does not hold".into());
        }
        let powers = top_decade(power_for_outage(&p, 1e-5)?);
        let pts = e
            .sweep(Scheme::Wpt, &p, &powers, Metric::Outage, TRIALS_SLOPE, SEED + m as u64)
            .map_err(err)?;
        let fit = fit_diversity_slope(&pts, 0..pts.len()).map_err(err)?;
        let analytic: Vec<CurvePoint> = powers
            .iter()
            .map(|&s| Ok(CurvePoint::analytic(s, t_terms_wpt(&p, s).map_err(err)?.total())))
            .collect::<Result<_, String>>()?;
        let exact = fit_diversity_slope(&analytic, 0..analytic.len()).map_err(err)?;
        let pass = (fit.slope + m as f64).abs() <= SLOPE_TOL_WPT;
        ok &= pass;
        lines.push(format!(
            "M={m}: slope {:.3} (analytic {:.3}, target {} +/- {SLOPE_TOL_WPT}, outage {:.2e}..{:.2e}){}",
            fit.slope,
            exact.slope,
            -(m as i32),
            pts[0].metric,
            pts[4].metric,
            if pass { "" } else { " MISS" }
        ));
    }
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn c2_wpt_floor(e: &Engine) -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for m in 1..=3 {
        let (cfg, p) = preset("fig1b", m, 0.5);
        if p.full_diversity_condition() {
            return Err("fig1b parameters satisfy the full-diversity condition".into());
        }
        let powers = [cfg.power_ratio(60.0), cfg.power_ratio(70.0)];
        let pts = e
            .sweep(Scheme::Wpt, &p, &powers, Metric::Outage, cfg.trials, SEED + 10 + m as u64)
            .map_err(err)?;
        let rel = (pts[1].metric / pts[0].metric - 1.0).abs();
        ok &= rel < WPT_FLOOR_REL;
        lines.push(format!("M={m}: {:.4e} -> {:.4e} ({:.1}%)", pts[0].metric, pts[1].metric, 100.0 * rel));
    }
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn c3_bac_floor(e: &Engine) -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for m in [1, 3, 5] {
        let (cfg, p) = preset("fig3", m, 0.5);
        let high = p_e0_high_snr(&p).map_err(err)?;
        for (k, dbm) in [65.0, 70.0].into_iter().enumerate() {
            let snr = cfg.power_ratio(dbm);
            let exact = p_e0_exact(&p, snr).map_err(err)?;
            let est = e
                .estimate_outage(Scheme::Bac, &p, snr, TRIALS_FLOOR, SEED + 20 + 2 * m as u64 + k as u64)
                .map_err(err)?;
            let within = (est.p_hat - exact).abs() <= BAC_FLOOR_CIS * est.ci_half_width;
            let close = (exact - high).abs() < E0_HIGH_SNR_ABS;
            ok &= within && close;
            lines.push(format!(
                "M={m} {dbm} dBm: MC {:.4e} +/- {:.1e} vs P(E0) {:.4e} (high-SNR {:.4e})",
                est.p_hat, est.ci_half_width, exact, high
            ));
        }
    }
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn c4_e0_trend() -> Check {
    let base = unit(1, 1.0, 1.0);
    let mut prev = f64::INFINITY;
    let mut vals = Vec::new();
    for m in [1, 2, 4, 8, 16, 32] {
        let v = p_e0_high_snr(&base.with_m_devices(m).map_err(err)?).map_err(err)?;
        if !(v < prev) {
            return Err(format!("P(E0) not decreasing at M={m}: {v:.4e} after {prev:.4e}"));
        }
        prev = v;
        vals.push(format!("{v:.3e}"));
    }
    let mut ratios = Vec::new();
    let mut prev_gap = f64::INFINITY;
    for m in [16, 32, 64, 128] {
        let p = base.with_m_devices(m).map_err(err)?;
        let r = p_e0_evt(&p).map_err(err)? / p_e0_high_snr(&p).map_err(err)?;
        let gap = (r - 1.0).abs();
        if !(gap < prev_gap) {
            return Err(format!("EVT ratio does not approach 1 at M={m}: {r:.4}"));
        }
        prev_gap = gap;
        ratios.push(format!("{r:.4}"));
    }
    Ok(format!("P(E0) {}; EVT ratio {}", vals.join(" > "), ratios.join(", ")))
}

fn c5_bac_cap(e: &Engine) -> Check {
    let p = unit(3, 0.1, 1.2);
    let powers = top_decade(1e4);
    let mut pts = Vec::new();
    for (i, &snr) in powers.iter().enumerate() {
        let ev = e.bac_events(&p, snr, TRIALS_SLOPE, SEED + 30 + i as u64).map_err(err)?;
        let c = ev.conditional_outage().map_err(err)?;
        pts.push(CurvePoint {
            power_ratio: snr,
            metric: c.p_hat,
            ci_half_width: c.ci_half_width,
        });
    }
    let fit = fit_diversity_slope(&pts, 0..pts.len()).map_err(err)?;
    let msg = format!(
        "M=3 conditional slope {:.3} over p 1e3..1e4 (outage {:.2e}..{:.2e}), window ({}, {})",
        fit.slope, pts[0].metric, pts[4].metric, BAC_CAP_SLOPE.0, BAC_CAP_SLOPE.1
    );
    if fit.slope > BAC_CAP_SLOPE.0 && fit.slope < BAC_CAP_SLOPE.1 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c6_scheme_ordering(e: &Engine) -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for m in [2, 3] {
        let (cfg, p) = preset("fig1a", m, 0.5);
        for (k, dbm) in [40.0, 45.0, 50.0].into_iter().enumerate() {
            let snr = cfg.power_ratio(dbm);
            let seed = SEED + 40 + 10 * m as u64 + k as u64;
            let w = e.estimate_outage(Scheme::Wpt, &p, snr, TRIALS_FIG, seed).map_err(err)?;
            let b = e.estimate_outage(Scheme::Bac, &p, snr, TRIALS_FIG, seed).map_err(err)?;
            let pass = b.p_hat - w.p_hat > w.ci_half_width + b.ci_half_width;
            ok &= pass;
            lines.push(format!("M={m} {dbm} dBm: WPT {:.2e} < BAC {:.2e}", w.p_hat, b.p_hat));
        }
    }
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn c7_rate_crossover(e: &Engine) -> Check {
    let (cfg, p) = preset("fig2b", 5, 0.5);
    let snr = cfg.power_ratio(cfg.power_dbm_range.stop);
    let w = e.estimate_ergodic_rate(Scheme::Wpt, &p, snr, TRIALS_FIG, SEED + 70).map_err(err)?;
    let b = e.estimate_ergodic_rate(Scheme::Bac, &p, snr, TRIALS_FIG, SEED + 71).map_err(err)?;
    let sd = (w.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    let msg = format!(
        "{} dBm: BAC {:.3} vs WPT {:.3} BPCU (sd {:.1e})",
        cfg.power_dbm_range.stop, b.mean_rate, w.mean_rate, sd
    );
    if b.mean_rate - w.mean_rate > SIGMAS * sd {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c8_alpha(e: &Engine) -> Check {
    let dbm = 20.0;
    let mut est = Vec::new();
    for (i, alpha) in [0.1, 0.5, 0.9].into_iter().enumerate() {
        let (cfg, p) = preset("fig4", 5, alpha);
        let o = e
            .estimate_outage(Scheme::Wpt, &p, cfg.power_ratio(dbm), TRIALS_FIG, SEED + 80 + i as u64)
            .map_err(err)?;
        est.push(o);
    }
    let beats = |a: usize| {
        let ci = (est[1].ci_half_width.powi(2) + est[a].ci_half_width.powi(2)).sqrt();
        est[a].p_hat - est[1].p_hat > SIGMAS * ci
    };
    let msg = format!(
        "{dbm} dBm: alpha 0.1 {:.3e}, 0.5 {:.3e}, 0.9 {:.3e}",
        est[0].p_hat, est[1].p_hat, est[2].p_hat
    );
    if beats(0) && beats(2) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c9_cross_layer(e: &Engine) -> Check {
    let p = unit(2, 0.1, 1.2);
    let mut lines = Vec::new();
    let mut ok = true;
    for (i, snr) in [1e3, 1e4].into_iter().enumerate() {
        let t = t_terms_wpt(&p, snr).map_err(err)?.total();
        let est = e.estimate_outage(Scheme::Wpt, &p, snr, TRIALS_SLOPE, SEED + 90 + i as u64).map_err(err)?;
        let sd = (t * (1.0 - t) / TRIALS_SLOPE as f64).sqrt();
        let z = (est.p_hat - t) / sd;
        ok &= z.abs() <= SIGMAS;
        lines.push(format!("p={snr:e}: MC {:.5e} vs sum T {:.5e} (z={z:+.2})", est.p_hat, t));
    }
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn c10_numerics() -> Check {
    let mut worst_bessel: f64 = 0.0;
    let mut x = 1e-12;
    while x <= 700.0 {
        for (nu, f) in [(0.0, bessel_k0 as fn(f64) -> nhs_core::Result<f64>), (1.0, bessel_k1)] {
            let got = f(x).map_err(err)? * x.exp();
            worst_bessel = worst_bessel.max((got / common::scaled_bessel_k(nu, x) - 1.0).abs());
        }
        x *= 1.37;
    }
    if worst_bessel > BESSEL_REL_TOL {
        return Err(format!("Bessel relative error {worst_bessel:.2e}"));
    }

    let mut worst_res: f64 = 0.0;
    let mut check = |branch, x: f64| -> Result<(), String> {
        let w = lambert_w(branch, x).map_err(err)?;
        worst_res = worst_res.max((w * w.exp() - x).abs() / x.abs().max(1.0));
        Ok(())
    };
    for k in 0..=2000 {
        let t = k as f64 / 2000.0;
        check(BranchW::Principal, BRANCH_POINT + t * (1e3 - BRANCH_POINT))?;
        check(BranchW::MinusOne, BRANCH_POINT * (1.0 - t) - 1e-300 * t)?;
        check(BranchW::MinusOne, -(10f64.powf(-0.44 - 299.0 * t)))?;
    }
    if worst_res > RESIDUAL_TOL {
        return Err(format!("Lambert residual {worst_res:.2e}"));
    }
    let w = lambert_w(BranchW::MinusOne, -0.01).map_err(err)?;
    if (w - common::lambert_bisect(-0.01, -20.0, -1.0)).abs() > 1e-12 {
        return Err(format!("W-1(-0.01) = {w}"));
    }
    for u in [0.5f64, 1.0, 2.0, 5.0, 10.0] {
        let w = lambert_w(BranchW::MinusOne, -(-u - 1.0).exp()).map_err(err)?;
        let lower = -1.0 - (2.0 * u).sqrt() - u;
        let upper = -1.0 - (2.0 * u).sqrt() - 2.0 / 3.0 * u;
        if !(lower < w && w < upper) {
            return Err(format!("u-form bound fails at u={u}: {w}"));
        }
    }

    let scale = LinkScale::new(1.0).map_err(err)?;
    let mut worst_fd: f64 = 0.0;
    for x in [0.1, 1.0, 5.0] {
        let h = 1e-5 * x;
        let d = (gamma_cdf(x + h, scale).map_err(err)? - gamma_cdf(x - h, scale).map_err(err)?) / (2.0 * h);
        worst_fd = worst_fd.max((d / gamma_pdf(x, scale).map_err(err)? - 1.0).abs());
    }
    if worst_fd > CDF_PDF_REL_TOL {
        return Err(format!("cdf/pdf mismatch {worst_fd:.2e}"));
    }
    let norm = integrate_to_infinity(
        |t| if t == 0.0 { 0.0 } else { 2.0 * t * gamma_pdf(t * t, scale).unwrap_or(f64::NAN) },
        0.0,
        Tolerance::new(1e-13, 1e-12),
    )
    .map_err(err)?
    .value;
    if (norm - 1.0).abs() > PDF_NORM_TOL {
        return Err(format!("pdf integrates to {norm}"));
    }
    Ok(format!(
        "Bessel err {worst_bessel:.1e}, W residual {worst_res:.1e}, u-bounds ok, cdf' err {worst_fd:.1e}, pdf mass {:.1e} off",
        (norm - 1.0).abs()
    ))
}

fn main() -> ExitCode {
    let engine = Engine::from_env().expect("thread pool");
    let criteria: [(&str, &dyn Fn() -> Check); 10] = [
        ("WPT diversity equals M", &|| c1_wpt_diversity(&engine)),
        ("WPT floor when the condition fails", &|| c2_wpt_floor(&engine)),
        ("BAC floor equals P(E0)", &|| c3_bac_floor(&engine)),
        ("P(E0) vanishes as M grows", &c4_e0_trend),
        ("BAC diversity capped near one", &|| c5_bac_cap(&engine)),
        ("WPT outage below BAC", &|| c6_scheme_ordering(&engine)),
        ("BAC ergodic rate above WPT", &|| c7_rate_crossover(&engine)),
        ("alpha = 0.5 beats 0.1 and 0.9", &|| c8_alpha(&engine)),
        ("T-terms match simulated WPT outage", &|| c9_cross_layer(&engine)),
        ("special functions and channel numerics", &c10_numerics),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
