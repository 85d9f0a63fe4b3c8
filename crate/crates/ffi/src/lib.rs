//! C ABI over `nhs-core`.
//!
//! Every fallible function returns an [`NhsStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be copied out with [`nhs_last_error_message`]. Parameter sets and engines
//! are opaque handles released with their `_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nhs_core::analysis;
use nhs_core::channel::{gamma_cdf, gamma_pdf};
use nhs_core::specfun::{self, BranchW};
use nhs_core::{Engine, Error, LinkScale, Scenario, Scheme, SystemParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NhsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    Quadrature = 4,
    InsufficientPoints = 5,
    InvalidInput = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NhsScheme {
    Wpt = 0,
    Bac = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NhsBranch {
    /// `W_0`, defined on `[-1/e, inf)`.
    Principal = 0,
    /// `W_-1`, defined on `[-1/e, 0)`.
    MinusOne = 1,
}

/// Plain-data scenario; mirrors the Rust `Scenario`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NhsScenario {
    pub m_devices: usize,
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub r0: f64,
    pub rs: f64,
    pub phi: f64,
    pub d0: f64,
    pub dh: f64,
    pub dg: f64,
}

impl From<Scenario> for NhsScenario {
    fn from(s: Scenario) -> Self {
        NhsScenario {
            m_devices: s.m_devices,
            alpha: s.alpha,
            beta: s.beta,
            eta: s.eta,
            r0: s.r0,
            rs: s.rs,
            phi: s.phi,
            d0: s.d0,
            dh: s.dh,
            dg: s.dg,
        }
    }
}

impl From<NhsScenario> for Scenario {
    fn from(s: NhsScenario) -> Self {
        Scenario {
            m_devices: s.m_devices,
            alpha: s.alpha,
            beta: s.beta,
            eta: s.eta,
            r0: s.r0,
            rs: s.rs,
            phi: s.phi,
            d0: s.d0,
            dh: s.dh,
            dg: s.dg,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NhsOutage {
    pub trials: u64,
    pub failures: u64,
    pub p_hat: f64,
    pub ci_half_width: f64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NhsRate {
    pub trials: u64,
    pub mean_rate: f64,
    pub std_error: f64,
    pub seed: u64,
}

/// Validated system parameters.
pub struct NhsParams(SystemParams);

/// Monte Carlo engine with its own worker pool.
pub struct NhsEngine(Engine);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NhsStatus {
    match e {
        Error::Domain { .. } => NhsStatus::Domain,
        Error::InvalidParameter { .. } => NhsStatus::InvalidParameter,
        Error::Quadrature { .. } => NhsStatus::Quadrature,
        Error::InsufficientPoints { .. } => NhsStatus::InsufficientPoints,
        Error::InvalidInput(_) => NhsStatus::InvalidInput,
    }
}

/// Runs `body`, mapping errors and panics to status codes.
fn guard(body: impl FnOnce() -> Result<(), (NhsStatus, String)>) -> NhsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NhsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NhsStatus::Panic
        }
    }
}

fn core(e: Error) -> (NhsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (NhsStatus, String) {
    (NhsStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), (NhsStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn params<'a>(p: *const NhsParams) -> Result<&'a SystemParams, (NhsStatus, String)> {
    p.as_ref().map(|p| &p.0).ok_or_else(|| null("params"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nhs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (always
/// NUL-terminated when `len > 0`). Returns the buffer size needed for the
/// full message including the NUL, or 0 when there is no error.
#[no_mangle]
pub unsafe extern "C" fn nhs_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Default scenario: one device, alpha 0.5, beta 0.1, eta 0.1, r0 0.1,
/// rs 1.2, phi 3.5, unit distances.
#[no_mangle]
pub extern "C" fn nhs_scenario_default() -> NhsScenario {
    Scenario::default().into()
}

#[no_mangle]
pub unsafe extern "C" fn nhs_params_new(scenario: *const NhsScenario, out: *mut *mut NhsParams) -> NhsStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = SystemParams::new((*s).into()).map_err(core)?;
        out.write(Box::into_raw(Box::new(NhsParams(p))));
        Ok(())
    })
}

/// Releases a handle from [`nhs_params_new`]; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nhs_params_free(params: *mut NhsParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Whether `bar_eps0 * bar_epss < 1`.
#[no_mangle]
pub unsafe extern "C" fn nhs_params_full_diversity(params: *const NhsParams, out: *mut bool) -> NhsStatus {
    guard(|| write(out, "out", self::params(params)?.full_diversity_condition()))
}

/// `threads == 0` picks the default worker count.
#[no_mangle]
pub unsafe extern "C" fn nhs_engine_new(threads: usize, out: *mut *mut NhsEngine) -> NhsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let e = Engine::new((threads > 0).then_some(threads)).map_err(core)?;
        out.write(Box::into_raw(Box::new(NhsEngine(e))));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn nhs_engine_free(engine: *mut NhsEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

#[no_mangle]
pub unsafe extern "C" fn nhs_bessel_k0(x: f64, out: *mut f64) -> NhsStatus {
    guard(|| write(out, "out", specfun::bessel_k0(x).map_err(core)?))
}

#[no_mangle]
pub unsafe extern "C" fn nhs_bessel_k1(x: f64, out: *mut f64) -> NhsStatus {
    guard(|| write(out, "out", specfun::bessel_k1(x).map_err(core)?))
}

#[no_mangle]
pub unsafe extern "C" fn nhs_lambert_w(branch: NhsBranch, x: f64, out: *mut f64) -> NhsStatus {
    let b = match branch {
        NhsBranch::Principal => BranchW::Principal,
        NhsBranch::MinusOne => BranchW::MinusOne,
    };
    guard(|| write(out, "out", specfun::lambert_w(b, x).map_err(core)?))
}

/// CDF of `|g|^2 |h|^2` with exponential rates multiplying to `rate_product`.
#[no_mangle]
pub unsafe extern "C" fn nhs_gamma_cdf(x: f64, rate_product: f64, out: *mut f64) -> NhsStatus {
    guard(|| {
        let scale = LinkScale::new(rate_product).map_err(core)?;
        write(out, "out", gamma_cdf(x, scale).map_err(core)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn nhs_gamma_pdf(x: f64, rate_product: f64, out: *mut f64) -> NhsStatus {
    guard(|| {
        let scale = LinkScale::new(rate_product).map_err(core)?;
        write(out, "out", gamma_pdf(x, scale).map_err(core)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn nhs_p_e0_exact(params: *const NhsParams, p: f64, out: *mut f64) -> NhsStatus {
    guard(|| write(out, "out", analysis::p_e0_exact(self::params(params)?, p).map_err(core)?))
}

#[no_mangle]
pub unsafe extern "C" fn nhs_p_e0_high_snr(params: *const NhsParams, out: *mut f64) -> NhsStatus {
    guard(|| write(out, "out", analysis::p_e0_high_snr(self::params(params)?).map_err(core)?))
}

/// Requires at least 3 devices.
#[no_mangle]
pub unsafe extern "C" fn nhs_p_e0_evt(params: *const NhsParams, out: *mut f64) -> NhsStatus {
    guard(|| write(out, "out", analysis::p_e0_evt(self::params(params)?).map_err(core)?))
}

/// Lower bound on the admitted-device outage term with `m` admissible
/// devices, `1 <= m < M`.
#[no_mangle]
pub unsafe extern "C" fn nhs_qm_lower_bound(params: *const NhsParams, p: f64, m: usize, out: *mut f64) -> NhsStatus {
    guard(|| write(out, "out", analysis::qm_lower_bound(self::params(params)?, p, m).map_err(core)?))
}

/// Writes `T_0 .. T_M` into `terms[0..=M]`. `len` must be at least `M + 1`;
/// otherwise `BufferTooSmall` is returned and `*written` holds the size
/// needed. `condition_holds` may be null.
#[no_mangle]
pub unsafe extern "C" fn nhs_t_terms_wpt(
    params: *const NhsParams,
    p: f64,
    terms: *mut f64,
    len: usize,
    written: *mut usize,
    condition_holds: *mut bool,
) -> NhsStatus {
    guard(|| {
        let prm = self::params(params)?;
        if written.is_null() {
            return Err(null("written"));
        }
        let needed = prm.m_devices() + 1;
        written.write(needed);
        if len < needed {
            return Err((NhsStatus::BufferTooSmall, format!("need {needed} slots, got {len}")));
        }
        if terms.is_null() {
            return Err(null("terms"));
        }
        let t = analysis::t_terms_wpt(prm, p).map_err(core)?;
        ptr::copy_nonoverlapping(t.terms.as_ptr(), terms, needed);
        if !condition_holds.is_null() {
            condition_holds.write(t.condition_holds);
        }
        Ok(())
    })
}

fn scheme(s: NhsScheme) -> Scheme {
    match s {
        NhsScheme::Wpt => Scheme::Wpt,
        NhsScheme::Bac => Scheme::Bac,
    }
}

#[no_mangle]
pub unsafe extern "C" fn nhs_estimate_outage(
    engine: *const NhsEngine,
    params: *const NhsParams,
    scheme: NhsScheme,
    p: f64,
    trials: u64,
    seed: u64,
    out: *mut NhsOutage,
) -> NhsStatus {
    guard(|| {
        let e = engine.as_ref().ok_or_else(|| null("engine"))?;
        let est = e
            .0
            .estimate_outage(self::scheme(scheme), self::params(params)?, p, trials, seed)
            .map_err(core)?;
        write(
            out,
            "out",
            NhsOutage {
                trials: est.trials,
                failures: est.failures,
                p_hat: est.p_hat,
                ci_half_width: est.ci_half_width,
                seed: est.seed,
            },
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn nhs_estimate_ergodic_rate(
    engine: *const NhsEngine,
    params: *const NhsParams,
    scheme: NhsScheme,
    p: f64,
    trials: u64,
    seed: u64,
    out: *mut NhsRate,
) -> NhsStatus {
    guard(|| {
        let e = engine.as_ref().ok_or_else(|| null("engine"))?;
        let est = e
            .0
            .estimate_ergodic_rate(self::scheme(scheme), self::params(params)?, p, trials, seed)
            .map_err(core)?;
        write(
            out,
            "out",
            NhsRate {
                trials: est.trials,
                mean_rate: est.mean_rate,
                std_error: est.std_error,
                seed: est.seed,
            },
        )
    })
}
