//! C ABI for the secrecy outage library.
//!
//! Plain-old-data structs mirror the library's configuration types, results
//! come back through out-pointers, and every function returns a status code.
//! Sweeps run behind an opaque handle so bindings can stream rows without
//! owning Rust memory. The header `include/hetsec.h` is generated at build
//! time by cbindgen.

use hetsec_core::asymptotics;
use hetsec_core::channel_model::{LinkGains, LinkGeometry, LinkPath, RngStream};
use hetsec_core::experiments::{self, Method, SweepOutcome};
use hetsec_core::schemes_analytic::{self, Cell, Scheme, SystemConfig};
use hetsec_core::schemes_montecarlo;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HetsecStatus {
    HetsecOk = 0,
    /// An argument fell outside its mathematical or structural domain.
    HetsecErrDomain = 1,
    /// A numeric routine failed (non-convergence, inconsistency).
    HetsecErrNumeric = 2,
    /// A required pointer argument was null or text was not valid UTF-8.
    HetsecErrArgument = 3,
    /// The sweep configuration failed to parse or validate.
    HetsecErrConfig = 4,
}

/// Spectrum-sharing scheme selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HetsecScheme {
    HetsecSchemeOss = 0,
    HetsecSchemeIlNoss = 1,
    HetsecSchemeIcNoss = 2,
}

/// Cell selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HetsecCell {
    HetsecCellMacro = 0,
    HetsecCellSmall = 1,
}

/// The six average channel power gains.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HetsecGains {
    pub mbs_mu: f64,
    pub mbs_su: f64,
    pub sbs_su: f64,
    pub sbs_mu: f64,
    pub mbs_eve: f64,
    pub sbs_eve: f64,
}

/// Distance / path-loss exponent / small-scale variance of one link.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HetsecLinkPath {
    pub distance_m: f64,
    pub path_loss_exp: f64,
    pub fading_var: f64,
}

/// Geometry of all six links.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HetsecGeometry {
    pub mbs_mu: HetsecLinkPath,
    pub mbs_su: HetsecLinkPath,
    pub sbs_su: HetsecLinkPath,
    pub sbs_mu: HetsecLinkPath,
    pub mbs_eve: HetsecLinkPath,
    pub sbs_eve: HetsecLinkPath,
}

/// System operating point. The macro SNR is given in dB; conversion to
/// linear units happens at this boundary.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HetsecConfig {
    pub gamma_macro_db: f64,
    pub beta: f64,
    pub alpha_split: f64,
    pub rate_macro: f64,
    pub rate_small: f64,
}

/// One Monte-Carlo estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HetsecEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// One sweep result row. Missing cells (an analytic row's stderr, values a
/// failed point never produced) are NaN; `has_error` flags rows whose error
/// column is set.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HetsecRow {
    pub axis_value: f64,
    pub scheme: HetsecScheme,
    /// 0 analytic, 1 monte carlo, 2 lower bound, 3 upper bound.
    pub method: i32,
    pub p_macro: f64,
    pub p_small: f64,
    pub p_overall: f64,
    pub stderr: f64,
    pub has_error: bool,
}

fn to_gains(gains: &HetsecGains) -> Result<LinkGains, HetsecStatus> {
    LinkGains::new(
        gains.mbs_mu,
        gains.mbs_su,
        gains.sbs_su,
        gains.sbs_mu,
        gains.mbs_eve,
        gains.sbs_eve,
    )
    .map_err(|_| HetsecStatus::HetsecErrDomain)
}

fn to_config(cfg: &HetsecConfig) -> Result<SystemConfig, HetsecStatus> {
    let config = SystemConfig {
        snr_macro: 10f64.powf(cfg.gamma_macro_db / 10.0),
        smr: cfg.beta,
        spectrum_split: cfg.alpha_split,
        rate_macro: cfg.rate_macro,
        rate_small: cfg.rate_small,
    };
    config
        .validate()
        .map_err(|_| HetsecStatus::HetsecErrDomain)?;
    Ok(config)
}

fn to_scheme(scheme: HetsecScheme) -> Scheme {
    match scheme {
        HetsecScheme::HetsecSchemeOss => Scheme::Oss,
        HetsecScheme::HetsecSchemeIlNoss => Scheme::IlNoss,
        HetsecScheme::HetsecSchemeIcNoss => Scheme::IcNoss,
    }
}

fn to_cell(cell: HetsecCell) -> Cell {
    match cell {
        HetsecCell::HetsecCellMacro => Cell::Macro,
        HetsecCell::HetsecCellSmall => Cell::Small,
    }
}

/// Average channel gains from link geometry (d^{-alpha} * delta^2 per link).
///
/// # Safety
/// `geometry` and `out` must be valid, aligned pointers.
#[no_mangle]
pub unsafe extern "C" fn hetsec_gains_from_geometry(
    geometry: *const HetsecGeometry,
    out: *mut HetsecGains,
) -> HetsecStatus {
    if geometry.is_null() || out.is_null() {
        return HetsecStatus::HetsecErrArgument;
    }
    let g = &*geometry;
    let path = |p: &HetsecLinkPath| LinkPath::new(p.distance_m, p.path_loss_exp, p.fading_var);
    let geom = LinkGeometry {
        mbs_mu: path(&g.mbs_mu),
        mbs_su: path(&g.mbs_su),
        sbs_su: path(&g.sbs_su),
        sbs_mu: path(&g.sbs_mu),
        mbs_eve: path(&g.mbs_eve),
        sbs_eve: path(&g.sbs_eve),
    };
    match geom.gains() {
        Ok(gains) => {
            *out = HetsecGains {
                mbs_mu: gains.mbs_mu,
                mbs_su: gains.mbs_su,
                sbs_su: gains.sbs_su,
                sbs_mu: gains.sbs_mu,
                mbs_eve: gains.mbs_eve,
                sbs_eve: gains.sbs_eve,
            };
            HetsecStatus::HetsecOk
        }
        Err(_) => HetsecStatus::HetsecErrDomain,
    }
}

/// Closed-form secrecy outage probability of one (scheme, cell) pair.
///
/// # Safety
/// `cfg`, `gains` and `out` must be valid, aligned pointers.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sop_analytic(
    scheme: HetsecScheme,
    cell: HetsecCell,
    cfg: *const HetsecConfig,
    gains: *const HetsecGains,
    out: *mut f64,
) -> HetsecStatus {
    if cfg.is_null() || gains.is_null() || out.is_null() {
        return HetsecStatus::HetsecErrArgument;
    }
    let (config, link_gains) = match (to_config(&*cfg), to_gains(&*gains)) {
        (Ok(c), Ok(g)) => (c, g),
        _ => return HetsecStatus::HetsecErrDomain,
    };
    match schemes_analytic::sop(to_scheme(scheme), to_cell(cell), &config, &link_gains) {
        Ok(p) => {
            *out = p;
            HetsecStatus::HetsecOk
        }
        Err(hetsec_core::NumericError::Domain(_)) => HetsecStatus::HetsecErrDomain,
        Err(_) => HetsecStatus::HetsecErrNumeric,
    }
}

/// Monte-Carlo secrecy outage estimate of one (scheme, cell) pair, using the
/// deterministic stream (seed, stream_index).
///
/// # Safety
/// `cfg`, `gains` and `out` must be valid, aligned pointers.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sop_monte_carlo(
    scheme: HetsecScheme,
    cell: HetsecCell,
    cfg: *const HetsecConfig,
    gains: *const HetsecGains,
    samples: u64,
    seed: u64,
    stream_index: u64,
    out: *mut HetsecEstimate,
) -> HetsecStatus {
    if cfg.is_null() || gains.is_null() || out.is_null() {
        return HetsecStatus::HetsecErrArgument;
    }
    let (config, link_gains) = match (to_config(&*cfg), to_gains(&*gains)) {
        (Ok(c), Ok(g)) => (c, g),
        _ => return HetsecStatus::HetsecErrDomain,
    };
    let stream = RngStream::new(seed, stream_index);
    match schemes_montecarlo::estimate_sop(
        to_scheme(scheme),
        to_cell(cell),
        &config,
        &link_gains,
        samples,
        stream,
    ) {
        Ok(est) => {
            *out = HetsecEstimate {
                p_hat: est.p_hat,
                stderr: est.stderr,
                samples: est.n,
            };
            HetsecStatus::HetsecOk
        }
        Err(hetsec_core::NumericError::Domain(_)) => HetsecStatus::HetsecErrDomain,
        Err(_) => HetsecStatus::HetsecErrNumeric,
    }
}

/// High-SNR lower/upper bounds of the interference-canceled macro-cell
/// secrecy outage probability.
///
/// # Safety
/// `cfg`, `gains`, `lower` and `upper` must be valid, aligned pointers.
#[no_mangle]
pub unsafe extern "C" fn hetsec_ic_macro_bounds(
    cfg: *const HetsecConfig,
    gains: *const HetsecGains,
    lower: *mut f64,
    upper: *mut f64,
) -> HetsecStatus {
    if cfg.is_null() || gains.is_null() || lower.is_null() || upper.is_null() {
        return HetsecStatus::HetsecErrArgument;
    }
    let (config, link_gains) = match (to_config(&*cfg), to_gains(&*gains)) {
        (Ok(c), Ok(g)) => (c, g),
        _ => return HetsecStatus::HetsecErrDomain,
    };
    match asymptotics::ic_macro_bounds(&config, &link_gains) {
        Ok((lo, hi)) => {
            *lower = lo;
            *upper = hi;
            HetsecStatus::HetsecOk
        }
        Err(_) => HetsecStatus::HetsecErrDomain,
    }
}

/// Noise-free outage floor of the interference-limited macro cell.
///
/// # Safety
/// `gains` and `out` must be valid, aligned pointers.
#[no_mangle]
pub unsafe extern "C" fn hetsec_il_macro_floor(
    gains: *const HetsecGains,
    rate: f64,
    beta: f64,
    out: *mut f64,
) -> HetsecStatus {
    if gains.is_null() || out.is_null() {
        return HetsecStatus::HetsecErrArgument;
    }
    let link_gains = match to_gains(&*gains) {
        Ok(g) => g,
        Err(status) => return status,
    };
    match asymptotics::il_macro_floor(&link_gains, rate, beta) {
        Ok(floor) => {
            *out = floor;
            HetsecStatus::HetsecOk
        }
        Err(hetsec_core::NumericError::Domain(_)) => HetsecStatus::HetsecErrDomain,
        Err(_) => HetsecStatus::HetsecErrNumeric,
    }
}

/// Opaque sweep handle: parsed configuration plus results once run.
pub struct HetsecSweep {
    spec: experiments::SweepSpec,
    outcome: Option<SweepOutcome>,
    error: Option<CString>,
}

/// Parse a sweep configuration document (same grammar as the CLI's
/// `sweep --config` files). Returns null when parsing fails.
///
/// # Safety
/// `config_text` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sweep_new(config_text: *const c_char) -> *mut HetsecSweep {
    if config_text.is_null() {
        return ptr::null_mut();
    }
    let Ok(text) = CStr::from_ptr(config_text).to_str() else {
        return ptr::null_mut();
    };
    match experiments::parse_config(text) {
        Ok(spec) => Box::into_raw(Box::new(HetsecSweep {
            spec,
            outcome: None,
            error: None,
        })),
        Err(_) => ptr::null_mut(),
    }
}

/// Build a sweep handle from a named preset (fig2 .. fig6).
///
/// # Safety
/// `name` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sweep_preset(name: *const c_char) -> *mut HetsecSweep {
    if name.is_null() {
        return ptr::null_mut();
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        return ptr::null_mut();
    };
    match experiments::preset(name) {
        Some(spec) => Box::into_raw(Box::new(HetsecSweep {
            spec,
            outcome: None,
            error: None,
        })),
        None => ptr::null_mut(),
    }
}

/// Override the Monte-Carlo sample count of a sweep handle.
///
/// # Safety
/// `sweep` must be a handle from `hetsec_sweep_new`/`hetsec_sweep_preset`.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sweep_set_samples(
    sweep: *mut HetsecSweep,
    samples: u64,
) -> HetsecStatus {
    let Some(sweep) = sweep.as_mut() else {
        return HetsecStatus::HetsecErrArgument;
    };
    sweep.spec.mc_samples = samples;
    match sweep.spec.validate() {
        Ok(()) => HetsecStatus::HetsecOk,
        Err(e) => {
            sweep.error = CString::new(e.to_string()).ok();
            HetsecStatus::HetsecErrConfig
        }
    }
}

/// Override the base RNG seed of a sweep handle.
///
/// # Safety
/// `sweep` must be a handle from `hetsec_sweep_new`/`hetsec_sweep_preset`.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sweep_set_seed(
    sweep: *mut HetsecSweep,
    seed: u64,
) -> HetsecStatus {
    let Some(sweep) = sweep.as_mut() else {
        return HetsecStatus::HetsecErrArgument;
    };
    sweep.spec.seed = seed;
    HetsecStatus::HetsecOk
}

/// Execute the sweep. Deterministic for a fixed (spec, seed).
///
/// # Safety
/// `sweep` must be a handle from `hetsec_sweep_new`/`hetsec_sweep_preset`.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sweep_run(sweep: *mut HetsecSweep) -> HetsecStatus {
    let Some(sweep) = sweep.as_mut() else {
        return HetsecStatus::HetsecErrArgument;
    };
    match experiments::run_sweep(&sweep.spec) {
        Ok(outcome) => {
            sweep.outcome = Some(outcome);
            HetsecStatus::HetsecOk
        }
        Err(e) => {
            sweep.error = CString::new(e.to_string()).ok();
            HetsecStatus::HetsecErrNumeric
        }
    }
}

/// Number of result rows produced by `hetsec_sweep_run` (0 before running).
///
/// # Safety
/// `sweep` must be a handle from `hetsec_sweep_new`/`hetsec_sweep_preset`.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sweep_row_count(sweep: *const HetsecSweep) -> usize {
    sweep
        .as_ref()
        .and_then(|s| s.outcome.as_ref())
        .map(|o| o.rows.len())
        .unwrap_or(0)
}

/// Fetch one result row by index.
///
/// # Safety
/// `sweep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sweep_row(
    sweep: *const HetsecSweep,
    index: usize,
    out: *mut HetsecRow,
) -> HetsecStatus {
    let Some(sweep) = sweep.as_ref() else {
        return HetsecStatus::HetsecErrArgument;
    };
    if out.is_null() {
        return HetsecStatus::HetsecErrArgument;
    }
    let Some(outcome) = sweep.outcome.as_ref() else {
        return HetsecStatus::HetsecErrArgument;
    };
    let Some(row) = outcome.rows.get(index) else {
        return HetsecStatus::HetsecErrArgument;
    };
    let scheme = match row.scheme {
        Scheme::Oss => HetsecScheme::HetsecSchemeOss,
        Scheme::IlNoss => HetsecScheme::HetsecSchemeIlNoss,
        Scheme::IcNoss => HetsecScheme::HetsecSchemeIcNoss,
    };
    let method = match row.method {
        Method::Analytic => 0,
        Method::Mc => 1,
        Method::LowerBound => 2,
        Method::UpperBound => 3,
    };
    *out = HetsecRow {
        axis_value: row.axis_value,
        scheme,
        method,
        p_macro: row.p_macro.unwrap_or(f64::NAN),
        p_small: row.p_small.unwrap_or(f64::NAN),
        p_overall: row.p_overall.unwrap_or(f64::NAN),
        stderr: row.stderr.unwrap_or(f64::NAN),
        has_error: row.error.is_some(),
    };
    HetsecStatus::HetsecOk
}

/// Last configuration/run error message of the handle, or null.
/// The pointer stays valid until the next call on the same handle.
///
/// # Safety
/// `sweep` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sweep_error(sweep: *const HetsecSweep) -> *const c_char {
    sweep
        .as_ref()
        .and_then(|s| s.error.as_ref())
        .map(|e| e.as_ptr())
        .unwrap_or(ptr::null())
}

/// Release a sweep handle.
///
/// # Safety
/// `sweep` must be a handle from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn hetsec_sweep_free(sweep: *mut HetsecSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}
