use crate::error::{Error, Result};

/// `-1/e`, the shared branch point of the two real branches.
pub const BRANCH_POINT: f64 = -0.367_879_441_171_442_33;

const MAX_ITER: usize = 64;

/// Real branch of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchW {
    /// `W0`, defined on `[-1/e, inf)`, values `>= -1`.
    Principal,
    /// `W-1`, defined on `[-1/e, 0)`, values `<= -1`.
    MinusOne,
}

/// Solves `w e^w = x` on the requested branch.
///
/// The initial guess comes from the branch-point series near `-1/e` and from
/// the logarithmic asymptotics elsewhere; Halley's method then polishes it
/// until `|w e^w - x| <= 1e-12 max(1, |x|)`.
pub fn lambert_w(branch: BranchW, x: f64) -> Result<f64> {
    if !x.is_finite() || x < BRANCH_POINT {
        return Err(Error::Domain {
            function: "lambert_w",
            value: x,
            constraint: "requires finite x >= -1/e",
        });
    }
    if branch == BranchW::MinusOne && x >= 0.0 {
        return Err(Error::Domain {
            function: "lambert_w",
            value: x,
            constraint: "branch W-1 requires -1/e <= x < 0",
        });
    }
    if x == BRANCH_POINT {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = initial_guess(branch, x);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = clamp_to_branch(branch, w - step);
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(1.0);
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

fn clamp_to_branch(branch: BranchW, w: f64) -> f64 {
    match branch {
        BranchW::Principal => w.max(-1.0),
        BranchW::MinusOne => w.min(-1.0),
    }
}

fn initial_guess(branch: BranchW, x: f64) -> f64 {
    let near_branch = x < BRANCH_POINT + 0.25;
    if near_branch {
        // w = -1 + p - p^2/3 + 11 p^3 / 72 with p = +-sqrt(2 (e x + 1))
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        let p = match branch {
            BranchW::Principal => p,
            BranchW::MinusOne => -p,
        };
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    }
    match branch {
        BranchW::MinusOne => {
            let l1 = (-x).ln();
            let l2 = (-l1).ln();
            l1 - l2 + l2 / l1
        }
        BranchW::Principal => {
            if x < 3.0 {
                x.ln_1p()
            } else {
                let l1 = x.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            }
        }
    }
}
