//! Secrecy outage analysis for a two-cell spectrum-sharing heterogeneous
//! network (macro cell + small cell) overheard by a passive eavesdropper.
//!
//! Three sharing schemes are covered:
//!
//! * **OSS** - orthogonal spectrum sharing: the cells occupy disjoint
//!   spectrum fractions and do not interfere.
//! * **IL-NOSS** - interference-limited non-orthogonal sharing: both cells
//!   transmit over the full band and mutual interference enters every SINR.
//! * **IC-NOSS** - interference-canceled non-orthogonal sharing: the macro
//!   base station spends part of its power on a specially designed signal
//!   that nulls the small-cell interference at the macro user while acting
//!   as jamming towards the eavesdropper.
//!
//! For each scheme the crate provides closed-form secrecy outage
//! probabilities over Rayleigh fading, an exact Monte-Carlo simulator of the
//! underlying signal model (the independent oracle for every closed form),
//! high-SNR asymptotics (outage floors, diversity slopes, bounds), and a
//! deterministic experiment runner that sweeps a configuration axis and
//! emits CSV.
//!
//! ```
//! use hetsec_core::channel_model::{LinkGains, RngStream};
//! use hetsec_core::schemes_analytic::{sop_oss_macro, Cell, Scheme, SystemConfig};
//! use hetsec_core::schemes_montecarlo::estimate_sop;
//!
//! let cfg = SystemConfig {
//!     snr_macro: 1e5,        // 50 dB
//!     smr: 0.5,              // gamma_S / gamma_M
//!     spectrum_split: 0.5,   // OSS spectrum fraction for the macro cell
//!     rate_macro: 1.0,       // bit/s/Hz
//!     rate_small: 1.0,
//! };
//! let gains = LinkGains::new(1.0, 1.0, 1.0, 0.2, 1.0, 1.0).unwrap();
//!
//! let closed = sop_oss_macro(&cfg, &gains).unwrap();
//! let est = estimate_sop(Scheme::Oss, Cell::Macro, &cfg, &gains,
//!                        100_000, RngStream::new(42, 0)).unwrap();
//! assert!((closed - est.p_hat).abs() < 4.0 * est.stderr);
//! ```

pub mod asymptotics;
pub mod channel_model;
pub mod error;
pub mod experiments;
pub mod schemes_analytic;
pub mod schemes_montecarlo;
pub mod special_math;

pub use error::NumericError;
