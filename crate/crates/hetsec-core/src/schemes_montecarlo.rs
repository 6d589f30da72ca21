//! Exact simulation of the signal model: per-draw channel capacities,
//! secrecy capacities, and empirical secrecy outage estimates. This module
//! is the independent oracle for every closed form in the crate.
//!
//! Noise power is normalized to one throughout, so transmit powers and SNRs
//! coincide. Estimation fans out over fixed-size chunks, each owning an
//! independent random stream; merging integer outage counts makes the
//! estimate identical whether chunks run serially or in parallel.

use crate::channel_model::{sample_fading, Complex, FadingDraw, LinkGains, RngStream};
use crate::error::{NumericError, Result};
use crate::schemes_analytic::{Cell, Scheme, SystemConfig};
use rayon::prelude::*;

/// Draws per estimation chunk. Fixed: it is part of the reproducibility
/// contract (the estimate depends on the seed and this chunking only).
pub const CHUNK_DRAWS: u64 = 1 << 16;

/// The four per-draw channel capacities of one scheme, in bit/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityTuple {
    pub main_macro: f64,
    pub main_small: f64,
    pub eve_macro: f64,
    pub eve_small: f64,
}

impl CapacityTuple {
    /// Secrecy capacity (main - eavesdropper)^+ of the given cell.
    pub fn secrecy(&self, cell: Cell) -> f64 {
        let diff = match cell {
            Cell::Macro => self.main_macro - self.eve_macro,
            Cell::Small => self.main_small - self.eve_small,
        };
        diff.max(0.0)
    }
}

/// Empirical outage probability with its sampling error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopEstimate {
    pub p_hat: f64,
    pub n: u64,
    pub stderr: f64,
}

impl SopEstimate {
    fn from_counts(outages: u64, n: u64) -> Self {
        let p_hat = outages as f64 / n as f64;
        Self {
            p_hat,
            n,
            stderr: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        }
    }
}

/// Power bookkeeping of the interference-cancellation design for one draw:
/// mean and instantaneous SNR spent on the specially designed signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcPowerState {
    /// Mean special-signal SNR: (sigma2_Sm / sigma2_Mm) * gamma_S.
    pub mean_special_snr: f64,
    /// Instantaneous special-signal SNR: (|h_Sm|^2 / sigma2_Mm) * gamma_S.
    pub inst_special_snr: f64,
}

impl IcPowerState {
    pub fn from_draw(draw: &FadingDraw, cfg: &SystemConfig, gains: &LinkGains) -> Result<Self> {
        let snr_small = cfg.snr_small();
        let mean_special_snr = gains.sbs_mu / gains.mbs_mu * snr_small;
        if mean_special_snr > cfg.snr_macro {
            return Err(NumericError::Domain(format!(
                "interference cancellation infeasible: mean special-signal \
                 power {mean_special_snr} exceeds the macro budget {}; \
                 requires beta <= sigma2_Mm/sigma2_Sm",
                cfg.snr_macro
            )));
        }
        Ok(Self {
            mean_special_snr,
            inst_special_snr: draw.h_sbs_mu.norm_sq() / gains.mbs_mu * snr_small,
        })
    }
}

/// OSS capacities: disjoint spectrum fractions, no mutual interference.
pub fn capacities_oss(draw: &FadingDraw, cfg: &SystemConfig, _gains: &LinkGains) -> CapacityTuple {
    let alpha = cfg.spectrum_split;
    let gm = cfg.snr_macro;
    let gs = cfg.snr_small();
    CapacityTuple {
        main_macro: alpha * (1.0 + gm * draw.h_mbs_mu.norm_sq()).log2(),
        main_small: (1.0 - alpha) * (1.0 + gs * draw.h_sbs_su.norm_sq()).log2(),
        eve_macro: alpha * (1.0 + gm * draw.h_mbs_eve.norm_sq()).log2(),
        eve_small: (1.0 - alpha) * (1.0 + gs * draw.h_sbs_eve.norm_sq()).log2(),
    }
}

/// IL-NOSS capacities: full-band transmission with mutual interference in
/// all four SINRs.
pub fn capacities_il(draw: &FadingDraw, cfg: &SystemConfig, _gains: &LinkGains) -> CapacityTuple {
    let gm = cfg.snr_macro;
    let gs = cfg.snr_small();
    CapacityTuple {
        main_macro: (1.0 + gm * draw.h_mbs_mu.norm_sq() / (gs * draw.h_sbs_mu.norm_sq() + 1.0))
            .log2(),
        main_small: (1.0 + gs * draw.h_sbs_su.norm_sq() / (gm * draw.h_mbs_su.norm_sq() + 1.0))
            .log2(),
        eve_macro: (1.0 + gm * draw.h_mbs_eve.norm_sq() / (gs * draw.h_sbs_eve.norm_sq() + 1.0))
            .log2(),
        eve_small: (1.0 + gs * draw.h_sbs_eve.norm_sq() / (gm * draw.h_mbs_eve.norm_sq() + 1.0))
            .log2(),
    }
}

/// IC-NOSS capacities.
///
/// The macro user sees an interference-free channel at the reduced budget
/// gamma_M - mean special SNR. The weight applied at the small base station
/// contributes the |h_Mm|^2 / sigma2_Mm factor to both receivers of the
/// small-cell signal, and the eavesdropper additionally absorbs the
/// instantaneous special-signal power as jamming.
pub fn capacities_ic(
    draw: &FadingDraw,
    cfg: &SystemConfig,
    gains: &LinkGains,
) -> Result<CapacityTuple> {
    let power = IcPowerState::from_draw(draw, cfg, gains)?;
    let gm = cfg.snr_macro;
    let gs = cfg.snr_small();
    let info_snr = gm - power.mean_special_snr;
    let weight_gain = draw.h_mbs_mu.norm_sq() / gains.mbs_mu;
    let su_denom = draw.h_mbs_su.norm_sq() * (info_snr + power.inst_special_snr) + 1.0;
    let eve_mac_denom = draw.h_mbs_eve.norm_sq() * power.inst_special_snr
        + draw.h_sbs_eve.norm_sq() * gs * weight_gain
        + 1.0;
    let eve_small_denom = draw.h_mbs_eve.norm_sq() * (info_snr + power.inst_special_snr) + 1.0;
    Ok(CapacityTuple {
        main_macro: (1.0 + info_snr * draw.h_mbs_mu.norm_sq()).log2(),
        main_small: (1.0 + draw.h_sbs_su.norm_sq() * gs * weight_gain / su_denom).log2(),
        eve_macro: (1.0 + draw.h_mbs_eve.norm_sq() * info_snr / eve_mac_denom).log2(),
        eve_small: (1.0 + draw.h_sbs_eve.norm_sq() * gs * weight_gain / eve_small_denom).log2(),
    })
}

/// Residual amplitude of the interference-cancellation identity at the macro
/// user for a unit-power probe symbol: |sqrt(mean special power) h_Mm x_m +
/// sqrt(P_S) h_Sm w_S x_S|. Zero to machine precision by construction.
pub fn ic_cancellation_residual(
    draw: &FadingDraw,
    cfg: &SystemConfig,
    gains: &LinkGains,
) -> Result<f64> {
    let power = IcPowerState::from_draw(draw, cfg, gains)?;
    let probe = Complex { re: 1.0, im: 0.0 };
    let residual = ic_received_interference(draw, cfg, gains, &power, probe, 0.0);
    Ok(residual.abs())
}

/// Same residual with the macro-link phase estimate perturbed by
/// `phase_error` radians; used to prove the cancellation test is live.
pub fn ic_cancellation_residual_perturbed(
    draw: &FadingDraw,
    cfg: &SystemConfig,
    gains: &LinkGains,
    phase_error: f64,
) -> Result<f64> {
    let power = IcPowerState::from_draw(draw, cfg, gains)?;
    let probe = Complex { re: 1.0, im: 0.0 };
    let residual = ic_received_interference(draw, cfg, gains, &power, probe, phase_error);
    Ok(residual.abs())
}

fn ic_received_interference(
    draw: &FadingDraw,
    cfg: &SystemConfig,
    gains: &LinkGains,
    power: &IcPowerState,
    probe: Complex,
    phase_error: f64,
) -> Complex {
    let ps = cfg.snr_small();
    let sigma_sm = gains.sbs_mu.sqrt();
    let sigma_mm = gains.mbs_mu.sqrt();
    // Specially designed signal and weight; the designed phase rotations use
    // the (possibly perturbed) channel phase estimates.
    let theta_mm = draw.h_mbs_mu.arg() + phase_error;
    let theta_sm = draw.h_sbs_mu.arg();
    let x_m = Complex::from_polar(draw.h_sbs_mu.abs() / sigma_sm, -theta_mm)
        .scale(-1.0)
        .mul(probe);
    let w_s = Complex::from_polar(draw.h_mbs_mu.abs() / sigma_mm, -theta_sm);
    let designed = draw.h_mbs_mu.scale(power.mean_special_snr.sqrt()).mul(x_m);
    let leaked = draw.h_sbs_mu.scale(ps.sqrt()).mul(w_s).mul(probe);
    designed.add(leaked)
}

/// Per-draw capacities of the selected scheme.
pub fn capacities(
    scheme: Scheme,
    draw: &FadingDraw,
    cfg: &SystemConfig,
    gains: &LinkGains,
) -> Result<CapacityTuple> {
    Ok(match scheme {
        Scheme::Oss => capacities_oss(draw, cfg, gains),
        Scheme::IlNoss => capacities_il(draw, cfg, gains),
        Scheme::IcNoss => capacities_ic(draw, cfg, gains)?,
    })
}

/// Monte-Carlo estimate of the secrecy outage probability of one
/// (scheme, cell) pair: the fraction of draws whose secrecy capacity falls
/// below the cell's rate target.
pub fn estimate_sop(
    scheme: Scheme,
    cell: Cell,
    cfg: &SystemConfig,
    gains: &LinkGains,
    n: u64,
    stream: RngStream,
) -> Result<SopEstimate> {
    cfg.validate()?;
    gains.validate()?;
    if n == 0 {
        return Err(NumericError::Domain("sample count must be >= 1".into()));
    }
    if scheme == Scheme::IcNoss {
        cfg.check_ic_feasible(gains)?;
    }
    let rate = match cell {
        Cell::Macro => cfg.rate_macro,
        Cell::Small => cfg.rate_small,
    };
    let outages = run_chunks(gains, n, stream, |draw| {
        let caps = capacities(scheme, draw, cfg, gains).expect("feasibility checked above");
        caps.secrecy(cell) < rate
    });
    Ok(SopEstimate::from_counts(outages, n))
}

/// Monte-Carlo estimate of the exact (pre-asymptotic) IC-NOSS macro outage
/// event, keeping every term the high-SNR closed form drops.
pub fn estimate_sop_exact_ic_macro(
    cfg: &SystemConfig,
    gains: &LinkGains,
    n: u64,
    stream: RngStream,
) -> Result<SopEstimate> {
    cfg.validate()?;
    gains.validate()?;
    cfg.check_ic_feasible(gains)?;
    if n == 0 {
        return Err(NumericError::Domain("sample count must be >= 1".into()));
    }
    let gm = cfg.snr_macro;
    let gs = cfg.snr_small();
    let mean_special = gains.sbs_mu / gains.mbs_mu * gs;
    let threshold = cfg.rate_macro.exp2();
    let info_snr = gm - mean_special;
    // Exact rearrangement of the outage event, multiplied out so no noise
    // term gets scaled away:
    //   (1 - 2^R + (gm - mean) |h_Mm|^2)
    //     * (|h_Me|^2 inst + |h_Se|^2 gs |h_Mm|^2 / s_Mm + 1)
    //   < 2^R (gm - mean) |h_Me|^2.
    let outages = run_chunks(gains, n, stream, |draw| {
        let inst_special = draw.h_sbs_mu.norm_sq() / gains.mbs_mu * gs;
        let lhs = (1.0 - threshold + info_snr * draw.h_mbs_mu.norm_sq())
            * (draw.h_mbs_eve.norm_sq() * inst_special
                + draw.h_sbs_eve.norm_sq() * gs * draw.h_mbs_mu.norm_sq() / gains.mbs_mu
                + 1.0);
        let rhs = threshold * info_snr * draw.h_mbs_eve.norm_sq();
        lhs < rhs
    });
    Ok(SopEstimate::from_counts(outages, n))
}

/// Split n draws into fixed-size chunks, each with its own child stream,
/// count the draws satisfying the predicate, and merge the integer counts.
fn run_chunks<P>(gains: &LinkGains, n: u64, stream: RngStream, outage: P) -> u64
where
    P: Fn(&FadingDraw) -> bool + Sync,
{
    let chunks = n.div_ceil(CHUNK_DRAWS);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream.child(chunk).rng();
            let draws = CHUNK_DRAWS.min(n - chunk * CHUNK_DRAWS);
            let mut count = 0u64;
            for _ in 0..draws {
                let draw = sample_fading(gains, &mut rng);
                if outage(&draw) {
                    count += 1;
                }
            }
            count
        })
        .sum()
}
