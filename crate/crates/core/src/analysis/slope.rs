use std::ops::Range;

use super::{CurvePoint, SlopeFit};
use crate::error::{Error, Result};

/// Fits `log10 metric = slope * log10 power + intercept` over `curve[window]`.
///
/// Points with a zero metric cannot be placed on a log axis; they are
/// skipped and counted in `points_excluded`.
pub fn fit_diversity_slope(curve: &[CurvePoint], window: Range<usize>) -> Result<SlopeFit> {
    if window.end > curve.len() || window.start > window.end {
        return Err(Error::InvalidInput(format!(
            "window {}..{} does not fit a curve of {} points",
            window.start,
            window.end,
            curve.len()
        )));
    }
    let pts = &curve[window];
    let mut excluded = 0;
    let mut xy = Vec::with_capacity(pts.len());
    for pt in pts {
        if pt.metric > 0.0 && pt.power_ratio > 0.0 {
            xy.push((pt.power_ratio.log10(), pt.metric.log10()));
        } else {
            excluded += 1;
        }
    }
    if xy.len() < 2 {
        return Err(Error::InsufficientPoints {
            found: xy.len(),
            excluded,
        });
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("all powers in the window are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xy.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let flat = xy.iter().all(|p| p.1 == xy[0].1);
    let r_squared = if flat || syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(SlopeFit {
        slope,
        intercept,
        r_squared,
        points_used: xy.len(),
        points_excluded: excluded,
    })
}

/// Indices of the points whose power lies within a factor of ten of the
/// largest power in the curve.
pub fn top_decade_window(curve: &[CurvePoint]) -> Range<usize> {
    let Some(max) = curve.iter().map(|p| p.power_ratio).reduce(f64::max) else {
        return 0..0;
    };
    let start = curve
        .iter()
        .position(|p| p.power_ratio >= max / 10.0 * (1.0 - 1e-12))
        .unwrap_or(curve.len());
    start..curve.len()
}
