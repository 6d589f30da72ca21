//! Closed-form secrecy outage probabilities of the three sharing schemes
//! over Rayleigh fading, the shared six-parameter kernel behind the
//! interference-limited expressions, and the overall-metric combiners.

use crate::channel_model::LinkGains;
use crate::error::{NumericError, Result};
use crate::special_math::{
    adaptive_integrate_with_breakpoints, e1_exp_scaled, inner_integral_exp_scaled,
    integrate_exp_weighted, QuadratureSpec,
};

/// Spectrum-sharing scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Orthogonal sharing: disjoint spectrum fractions, no interference.
    Oss,
    /// Interference-limited non-orthogonal sharing.
    IlNoss,
    /// Interference-canceled non-orthogonal sharing.
    IcNoss,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Oss => "OSS",
            Scheme::IlNoss => "IL",
            Scheme::IcNoss => "IC",
        }
    }
}

/// Which cell's secrecy outage is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Macro,
    Small,
}

/// System operating point. All quantities are linear (dB conversion happens
/// at the CLI boundary) and the noise power is normalized to one, so SNRs
/// and transmit powers coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Macro-cell SNR gamma_M (linear).
    pub snr_macro: f64,
    /// Small-to-macro SNR ratio beta = gamma_S / gamma_M.
    pub smr: f64,
    /// Spectrum fraction assigned to the macro cell under OSS, in [0, 1].
    pub spectrum_split: f64,
    /// Macro-cell secrecy rate target in bit/s/Hz (strictly positive).
    pub rate_macro: f64,
    /// Small-cell secrecy rate target in bit/s/Hz (strictly positive).
    pub rate_small: f64,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.snr_macro > 0.0 && self.snr_macro.is_finite()) {
            return Err(NumericError::Domain(format!(
                "macro SNR must be positive and finite, got {}",
                self.snr_macro
            )));
        }
        if !(self.smr >= 0.0 && self.smr.is_finite()) {
            return Err(NumericError::Domain(format!(
                "SMR must be nonnegative, got {}",
                self.smr
            )));
        }
        if !(0.0..=1.0).contains(&self.spectrum_split) {
            return Err(NumericError::Domain(format!(
                "spectrum split must lie in [0, 1], got {}",
                self.spectrum_split
            )));
        }
        // The closed forms drop the (.)^+ clamp of the secrecy capacity and
        // therefore disagree with the simulated event at exactly zero rate;
        // strictly positive targets keep both views consistent.
        if !(self.rate_macro > 0.0) || !(self.rate_small > 0.0) {
            return Err(NumericError::Domain(
                "secrecy rates must be strictly positive".into(),
            ));
        }
        Ok(())
    }

    /// Small-cell SNR gamma_S = beta * gamma_M.
    pub fn snr_small(&self) -> f64 {
        self.smr * self.snr_macro
    }

    /// Interference-cancellation feasibility: the mean special-signal power
    /// must not exceed the macro power budget, i.e. beta <= sigma2_Mm / sigma2_Sm.
    pub fn check_ic_feasible(&self, gains: &LinkGains) -> Result<()> {
        let bound = gains.mbs_mu / gains.sbs_mu;
        if self.smr > bound {
            return Err(NumericError::Domain(format!(
                "interference cancellation infeasible: beta = {} exceeds \
                 sigma2_Mm/sigma2_Sm = {bound}",
                self.smr
            )));
        }
        Ok(())
    }
}

/// How the two per-cell outage probabilities combine into one metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverallCombiner {
    /// Product of the two probabilities.
    Product,
    /// Mean of the two probabilities (the normalized-sum metric).
    Mean,
}

/// Combine per-cell secrecy outage probabilities into the overall metric.
pub fn overall_sop(p_macro: f64, p_small: f64, combiner: OverallCombiner) -> Result<f64> {
    for p in [p_macro, p_small] {
        if !(0.0..=1.0).contains(&p) {
            return Err(NumericError::Domain(format!(
                "probability {p} outside [0, 1]"
            )));
        }
    }
    Ok(match combiner {
        OverallCombiner::Product => p_macro * p_small,
        OverallCombiner::Mean => 0.5 * (p_macro + p_small),
    })
}

// ---------------------------------------------------------------------------
// OSS
// ---------------------------------------------------------------------------

/// OSS macro-cell secrecy outage probability.
pub fn sop_oss_macro(cfg: &SystemConfig, gains: &LinkGains) -> Result<f64> {
    cfg.validate()?;
    gains.validate()?;
    Ok(oss_cell_sop(
        cfg.rate_macro,
        cfg.spectrum_split,
        cfg.snr_macro,
        gains.mbs_mu,
        gains.mbs_eve,
    ))
}

/// OSS small-cell secrecy outage probability.
pub fn sop_oss_small(cfg: &SystemConfig, gains: &LinkGains) -> Result<f64> {
    cfg.validate()?;
    gains.validate()?;
    Ok(oss_cell_sop(
        cfg.rate_small,
        1.0 - cfg.spectrum_split,
        cfg.snr_small(),
        gains.sbs_su,
        gains.sbs_eve,
    ))
}

fn oss_cell_sop(rate: f64, fraction: f64, snr: f64, gain_main: f64, gain_eve: f64) -> f64 {
    if fraction <= 0.0 || snr <= 0.0 {
        // Zero spectrum (or a silent transmitter) means zero capacity and
        // certain outage at any positive rate.
        return 1.0;
    }
    // threshold = 2^{R/fraction}; lambda = (threshold - 1) / snr.
    let threshold = (rate / fraction).exp2();
    if threshold.is_infinite() {
        return 1.0;
    }
    let lambda = (threshold - 1.0) / snr;
    1.0 - gain_main / (gain_main + gain_eve * threshold) * (-lambda / gain_main).exp()
}

// ---------------------------------------------------------------------------
// Interference-limited kernel
// ---------------------------------------------------------------------------

/// Parameters of the shared outage kernel
/// P = Pr[ U < e + f V ] with U = |h_a|^2 / (b-scaled interference + 1) and
/// V the analogous wiretap-side ratio:
///
/// * `a` - inverse mean of the main-link gain,
/// * `b` - interferer SNR times interference gain over the main gain,
/// * `c`, `d` - same two quantities on the wiretap side,
/// * `e` - rate threshold offset,
/// * `f` - rate threshold slope (>= 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl KernelParams {
    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.c > 0.0 && self.b > 0.0 && self.d > 0.0) {
            return Err(NumericError::Domain(format!(
                "kernel parameters a, b, c, d must be positive: {self:?}"
            )));
        }
        if !(self.e >= 0.0) || !(self.f >= 1.0) {
            return Err(NumericError::Domain(format!(
                "kernel parameters need e >= 0 and f >= 1: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Relative window around the removable singularity in which the dedicated
/// degenerate branch is used.
const KERNEL_DEGENERATE_EPS: f64 = 1e-9;
/// Below this relative distance from the singularity the general branch
/// loses too many digits to cancellation; the kernel integrates its defining
/// expression numerically instead.
const KERNEL_UNSTABLE_EPS: f64 = 1e-4;

/// Closed-form evaluation of the interference-limited outage kernel.
///
/// The general expression has a removable singularity on the manifold
/// b f = d (b e + 1). Exactly on it (within [`KERNEL_DEGENERATE_EPS`]
/// relative) the dedicated branch applies; in a thin shell around it the
/// closed form is evaluated by quadrature of the defining integral so the
/// kernel stays continuous to well below the branch tolerance.
pub fn il_kernel(p: &KernelParams) -> Result<f64> {
    p.validate()?;
    let lhs = p.b * p.f;
    let rhs = p.d * (p.b * p.e + 1.0);
    let gap = lhs - rhs;
    let scale = lhs.max(rhs);

    let value = if gap.abs() <= KERNEL_DEGENERATE_EPS * scale {
        kernel_degenerate(p)
    } else if gap.abs() <= KERNEL_UNSTABLE_EPS * scale {
        kernel_quadrature(p)?
    } else {
        kernel_general(p, gap)
    };

    if value < -1e-9 || value > 1.0 + 1e-9 {
        let excess = if value < 0.0 { -value } else { value - 1.0 };
        return Err(NumericError::Inconsistent { value, excess });
    }
    Ok(value.clamp(0.0, 1.0))
}

fn kernel_general(p: &KernelParams, gap: f64) -> f64 {
    let be1 = p.b * p.e + 1.0;
    let af_c = p.a * p.f + p.c;
    let g = (p.b * p.f * (p.c + p.d) - p.c * p.d * be1) / (gap * gap);
    let h = be1 * af_c / (p.b * p.f);
    let i = af_c / p.d;
    let j = -p.d / gap;
    let k = (p.a * p.b * (p.d * p.e - p.f) + (p.a + p.b) * p.d) * p.f / (gap * gap);
    // exp(h) * Ei(-h) = -e^h E1(h); the scaled form avoids overflow.
    let bracket = g * e1_exp_scaled(h) - k * e1_exp_scaled(i) + j;
    1.0 - (-p.a * p.e).exp() * bracket
}

fn kernel_degenerate(p: &KernelParams) -> f64 {
    let be1 = p.b * p.e + 1.0;
    let af_c = p.a * p.f + p.c;
    let l = (p.c - p.a * p.f) / (2.0 * p.d * be1);
    let i = af_c / p.d;
    let bracket = l + p.d / (2.0 * p.b * p.f) - l * i * e1_exp_scaled(i);
    1.0 - (-p.a * p.e).exp() * bracket
}

/// The kernel as its defining integral
/// P = int_0^inf [1 - exp(-a(e+fv)) / (b(e+fv)+1)]
///              [d/(dv+1)^2 + c/(dv+1)] e^{-cv} dv,
/// rescaled so the exponential-weight routine applies.
fn kernel_quadrature(p: &KernelParams) -> Result<f64> {
    let KernelParams { a, b, c, d, e, f } = *p;
    let integrand = move |s: f64| {
        let v = s / c;
        let u = e + f * v;
        let outage_given_v = 1.0 - (-a * u).exp() / (b * u + 1.0);
        let dv1 = d * v + 1.0;
        outage_given_v * (d / (dv1 * dv1) + c / dv1) / c
    };
    let spec = QuadratureSpec::adaptive(1e-11);
    let (value, _bound) = integrate_exp_weighted(integrand, &spec)?;
    Ok(value)
}

// ---------------------------------------------------------------------------
// IL-NOSS
// ---------------------------------------------------------------------------

/// Kernel parameters of the IL-NOSS macro cell.
pub fn il_macro_params(cfg: &SystemConfig, gains: &LinkGains) -> KernelParams {
    let snr_small = cfg.snr_small();
    let threshold = cfg.rate_macro.exp2();
    KernelParams {
        a: 1.0 / gains.mbs_mu,
        b: snr_small * gains.sbs_mu / gains.mbs_mu,
        c: 1.0 / gains.mbs_eve,
        d: snr_small * gains.sbs_eve / gains.mbs_eve,
        e: (threshold - 1.0) / cfg.snr_macro,
        f: threshold,
    }
}

/// Kernel parameters of the IL-NOSS small cell (roles of the two base
/// stations swapped).
pub fn il_small_params(cfg: &SystemConfig, gains: &LinkGains) -> KernelParams {
    let threshold = cfg.rate_small.exp2();
    KernelParams {
        a: 1.0 / gains.sbs_su,
        b: cfg.snr_macro * gains.mbs_su / gains.sbs_su,
        c: 1.0 / gains.sbs_eve,
        d: cfg.snr_macro * gains.mbs_eve / gains.sbs_eve,
        e: (threshold - 1.0) / cfg.snr_small(),
        f: threshold,
    }
}

/// IL-NOSS macro-cell secrecy outage probability.
pub fn sop_il_macro(cfg: &SystemConfig, gains: &LinkGains) -> Result<f64> {
    cfg.validate()?;
    gains.validate()?;
    if cfg.smr <= 0.0 {
        return Err(NumericError::Domain(
            "IL-NOSS needs a transmitting small cell (beta > 0)".into(),
        ));
    }
    il_kernel(&il_macro_params(cfg, gains))
}

/// IL-NOSS small-cell secrecy outage probability.
pub fn sop_il_small(cfg: &SystemConfig, gains: &LinkGains) -> Result<f64> {
    cfg.validate()?;
    gains.validate()?;
    if cfg.smr <= 0.0 {
        return Err(NumericError::Domain(
            "IL-NOSS needs a transmitting small cell (beta > 0)".into(),
        ));
    }
    il_kernel(&il_small_params(cfg, gains))
}

// ---------------------------------------------------------------------------
// IC-NOSS
// ---------------------------------------------------------------------------

/// Default quadrature for the two IC outer integrals. Adaptive from the
/// start: at high SNR the macro integrand develops a boundary layer near the
/// origin that a fixed rule cannot see.
fn ic_quadrature() -> QuadratureSpec {
    QuadratureSpec::adaptive(1e-9)
}

/// IC-NOSS macro-cell secrecy outage probability (high-SNR closed form).
///
/// Evaluates the semi-infinite integral of the conditional outage
/// probability against the exponential weight. The expression is asymptotic
/// in the macro SNR; at low SNR it underestimates the exact probability, so
/// callers that need the exact value should use the Monte-Carlo estimator.
pub fn sop_ic_macro(cfg: &SystemConfig, gains: &LinkGains) -> Result<f64> {
    cfg.validate()?;
    gains.validate()?;
    cfg.check_ic_feasible(gains)?;
    if cfg.smr <= 0.0 {
        return Err(NumericError::Domain(
            "IC-NOSS needs a transmitting small cell (beta > 0)".into(),
        ));
    }
    let threshold = cfg.rate_macro.exp2();
    let beta_snr = cfg.smr * cfg.snr_macro;
    let g = *gains;
    let f = move |x: f64| ic_macro_conditional_sop(x, threshold, beta_snr, &g);
    let (value, _bound) = integrate_exp_weighted(f, &ic_quadrature())?;
    Ok(value.clamp(0.0, 1.0))
}

/// Conditional macro outage probability given the normalized main-link draw
/// x = |h_Mm|^2 / sigma2_Mm.
///
/// f(x) = (varphi - phi)/varphi - phi e^{-varphi} I(-varphi, -phi), with
/// I the inverse-square integral, phi = sigma2_Mm sigma2_Se x /
/// (sigma2_Sm sigma2_Me) and varphi = phi + 2^R / (sigma2_Sm beta gamma x).
fn ic_macro_conditional_sop(x: f64, threshold: f64, beta_snr: f64, gains: &LinkGains) -> f64 {
    let phi = gains.mbs_mu * gains.sbs_eve * x / (gains.sbs_mu * gains.mbs_eve);
    let width = threshold / (gains.sbs_mu * beta_snr * x);
    let varphi = phi + width;
    if !varphi.is_finite() {
        // x so small that the outage threshold is unreachable: certain outage.
        return 1.0;
    }
    let first = width / varphi;
    if let Ok(j) = inner_integral_exp_scaled(phi, varphi) {
        let f = first - phi * j;
        // Both terms agree to leading order for narrow intervals; accept the
        // difference only while it retains ~11 digits, otherwise integrate
        // the pre-substitution form, which has no cancellation.
        if f >= 1e-2 * first && f <= 1.0 + 1e-9 {
            return f.clamp(0.0, 1.0);
        }
    }
    ic_macro_conditional_direct(x, threshold, beta_snr, gains)
}

/// Stable fallback: the conditional probability in its pre-substitution form
/// int_0^{z_max} p_Z(z) (1 - e^{-(width - slope z)}) dz, evaluated with
/// expm1 so narrow thresholds lose no precision.
fn ic_macro_conditional_direct(
    x: f64,
    threshold: f64,
    beta_snr: f64,
    gains: &LinkGains,
) -> f64 {
    let width = threshold / (gains.sbs_mu * beta_snr * x);
    let slope = gains.mbs_mu * x / gains.sbs_mu;
    let z_max = width / slope;
    let se = gains.sbs_eve;
    let me = gains.mbs_eve;
    let integrand = move |z: f64| {
        let denom = se + me * z;
        let p_z = me * se / (denom * denom);
        p_z * (-(-(width - slope * z)).exp_m1())
    };
    // p_Z varies on the scale se/me; seed panels geometrically in case the
    // interval dwarfs it.
    let mut cuts = Vec::new();
    let mut c = z_max * 0.5;
    for _ in 0..48 {
        cuts.push(c);
        c *= 0.5;
    }
    match adaptive_integrate_with_breakpoints(integrand, 0.0, z_max, &cuts, 1e-11, 4000) {
        Ok((v, _)) => v.clamp(0.0, 1.0),
        Err(_) => f64::NAN,
    }
}

/// Kernel parameters of the IC-NOSS small cell conditioned on the normalized
/// macro main-link draw x.
pub fn ic_small_params(x: f64, cfg: &SystemConfig, gains: &LinkGains) -> KernelParams {
    let threshold = cfg.rate_small.exp2();
    KernelParams {
        a: 1.0 / (gains.sbs_su * x),
        b: cfg.snr_macro * gains.mbs_su / (gains.sbs_su * x),
        c: 1.0 / (gains.sbs_eve * x),
        d: cfg.snr_macro * gains.mbs_eve / (gains.sbs_eve * x),
        e: (threshold - 1.0) / cfg.snr_small(),
        f: threshold,
    }
}

/// IC-NOSS small-cell secrecy outage probability.
///
/// Derived under a weak cross-interference assumption (sigma2_Sm much
/// smaller than one); [`ic_small_regime_diagnostic`] reports when the
/// configured gains leave that regime.
pub fn sop_ic_small(cfg: &SystemConfig, gains: &LinkGains) -> Result<f64> {
    cfg.validate()?;
    gains.validate()?;
    cfg.check_ic_feasible(gains)?;
    if cfg.smr <= 0.0 {
        return Err(NumericError::Domain(
            "IC-NOSS needs a transmitting small cell (beta > 0)".into(),
        ));
    }
    let cfg = *cfg;
    let g = *gains;
    let f = move |x: f64| il_kernel(&ic_small_params(x, &cfg, &g)).unwrap_or(f64::NAN);
    let (value, _bound) = integrate_exp_weighted(f, &ic_quadrature())?;
    Ok(value.clamp(0.0, 1.0))
}

/// Warns when the cross-interference gain is too large for the small-cell
/// closed form's weak-interference assumption.
pub fn ic_small_regime_diagnostic(gains: &LinkGains) -> Option<String> {
    if gains.sbs_mu > 0.1 * gains.mbs_mu {
        Some(format!(
            "sigma2_Sm = {} exceeds 0.1 * sigma2_Mm = {}; the IC small-cell \
             closed form assumes weak cross interference and may drift from \
             the exact Monte-Carlo value",
            gains.sbs_mu,
            0.1 * gains.mbs_mu
        ))
    } else {
        None
    }
}

/// Analytic secrecy outage probability of one (scheme, cell) pair.
pub fn sop(scheme: Scheme, cell: Cell, cfg: &SystemConfig, gains: &LinkGains) -> Result<f64> {
    match (scheme, cell) {
        (Scheme::Oss, Cell::Macro) => sop_oss_macro(cfg, gains),
        (Scheme::Oss, Cell::Small) => sop_oss_small(cfg, gains),
        (Scheme::IlNoss, Cell::Macro) => sop_il_macro(cfg, gains),
        (Scheme::IlNoss, Cell::Small) => sop_il_small(cfg, gains),
        (Scheme::IcNoss, Cell::Macro) => sop_ic_macro(cfg, gains),
        (Scheme::IcNoss, Cell::Small) => sop_ic_small(cfg, gains),
    }
}
