//! Channel statistics for the two-cell network: geometry-derived average
//! gains, Rayleigh fading realizations, and the analytic distribution
//! functions of the channel-gain ratios that drive the closed forms.
//!
//! Six links are modeled, all mutually independent Rayleigh processes:
//! MBS-MU, MBS-SU, SBS-SU, SBS-MU, MBS-E and SBS-E.

use crate::error::{NumericError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::TAU;

/// A complex channel coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn from_polar(magnitude: f64, phase: f64) -> Self {
        Self {
            re: magnitude * phase.cos(),
            im: magnitude * phase.sin(),
        }
    }

    pub fn mul(self, other: Complex) -> Complex {
        Complex {
            re: self.re * other.re - self.im * other.im,
            im: self.re * other.im + self.im * other.re,
        }
    }

    pub fn scale(self, s: f64) -> Complex {
        Complex {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn add(self, other: Complex) -> Complex {
        Complex {
            re: self.re + other.re,
            im: self.im + other.im,
        }
    }

    /// Squared magnitude |h|^2.
    pub fn norm_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }
}

/// The six average channel power gains sigma^2 of the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    /// MBS -> MU (macro main link).
    pub mbs_mu: f64,
    /// MBS -> SU (cross interference into the small cell).
    pub mbs_su: f64,
    /// SBS -> SU (small-cell main link).
    pub sbs_su: f64,
    /// SBS -> MU (cross interference into the macro cell).
    pub sbs_mu: f64,
    /// MBS -> eavesdropper.
    pub mbs_eve: f64,
    /// SBS -> eavesdropper.
    pub sbs_eve: f64,
}

impl LinkGains {
    pub fn new(
        mbs_mu: f64,
        mbs_su: f64,
        sbs_su: f64,
        sbs_mu: f64,
        mbs_eve: f64,
        sbs_eve: f64,
    ) -> Result<Self> {
        let gains = Self {
            mbs_mu,
            mbs_su,
            sbs_su,
            sbs_mu,
            mbs_eve,
            sbs_eve,
        };
        gains.validate()?;
        Ok(gains)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, g) in [
            ("mbs_mu", self.mbs_mu),
            ("mbs_su", self.mbs_su),
            ("sbs_su", self.sbs_su),
            ("sbs_mu", self.sbs_mu),
            ("mbs_eve", self.mbs_eve),
            ("sbs_eve", self.sbs_eve),
        ] {
            if !(g > 0.0 && g.is_finite()) {
                return Err(NumericError::Domain(format!(
                    "link gain {name} must be strictly positive and finite, got {g}"
                )));
            }
        }
        Ok(())
    }
}

/// Distance, path-loss exponent and small-scale variance of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPath {
    pub distance_m: f64,
    pub path_loss_exp: f64,
    pub fading_var: f64,
}

impl LinkPath {
    pub fn new(distance_m: f64, path_loss_exp: f64, fading_var: f64) -> Self {
        Self {
            distance_m,
            path_loss_exp,
            fading_var,
        }
    }

    pub fn gain(&self) -> Result<f64> {
        link_gain(self.distance_m, self.path_loss_exp, self.fading_var)
    }
}

/// Geometry description of all six links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub mbs_mu: LinkPath,
    pub mbs_su: LinkPath,
    pub sbs_su: LinkPath,
    pub sbs_mu: LinkPath,
    pub mbs_eve: LinkPath,
    pub sbs_eve: LinkPath,
}

impl LinkGeometry {
    pub fn gains(&self) -> Result<LinkGains> {
        LinkGains::new(
            self.mbs_mu.gain()?,
            self.mbs_su.gain()?,
            self.sbs_su.gain()?,
            self.sbs_mu.gain()?,
            self.mbs_eve.gain()?,
            self.sbs_eve.gain()?,
        )
    }
}

/// Average power gain d^{-alpha} * delta^2 of a link at distance d.
pub fn link_gain(distance_m: f64, path_loss_exp: f64, fading_var: f64) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(NumericError::Domain(format!(
            "distance must be positive, got {distance_m}"
        )));
    }
    if !(fading_var > 0.0) {
        return Err(NumericError::Domain(format!(
            "small-scale variance must be positive, got {fading_var}"
        )));
    }
    if path_loss_exp < 0.0 {
        return Err(NumericError::Domain(format!(
            "path-loss exponent must be nonnegative, got {path_loss_exp}"
        )));
    }
    Ok(distance_m.powf(-path_loss_exp) * fading_var)
}

/// One realization of the six complex channel coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingDraw {
    pub h_mbs_mu: Complex,
    pub h_mbs_su: Complex,
    pub h_sbs_su: Complex,
    pub h_sbs_mu: Complex,
    pub h_mbs_eve: Complex,
    pub h_sbs_eve: Complex,
}

/// A reproducible random stream identified by (seed, index).
///
/// Identical pairs reproduce identical draw sequences; distinct indices give
/// statistically independent streams, which is what makes chunked-parallel
/// Monte-Carlo estimates bit-identical to their serial counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub index: u64,
}

/// SplitMix64 finalizer; used to decorrelate stream labels.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, index: u64) -> Self {
        Self { seed, index }
    }

    /// Derive a sub-stream for the given tag. Children of distinct tags are
    /// independent; the derivation is a pure function of (seed, index, tag).
    pub fn child(&self, tag: u64) -> Self {
        Self {
            seed: self.seed,
            index: mix64(self.index ^ mix64(tag ^ 0x517c_c1b7_2722_0a95)),
        }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let words = [
            mix64(self.seed),
            mix64(self.seed ^ 0x9e37_79b9_7f4a_7c15),
            mix64(self.index),
            mix64(self.index ^ 0xd1b5_4a32_d192_ed03),
        ];
        let mut key = [0u8; 32];
        for (chunk, word) in key.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        ChaCha12Rng::from_seed(key)
    }
}

/// Draw |h|^2 ~ Exponential(mean sigma2) and a uniform phase, i.e. a
/// circularly-symmetric complex Gaussian coefficient.
fn rayleigh_coefficient<R: Rng>(sigma2: f64, rng: &mut R) -> Complex {
    let u: f64 = rng.gen();
    // 1 - u lies in (0, 1], so the log never sees zero.
    let power = -sigma2 * (1.0 - u).ln();
    let phase = TAU * rng.gen::<f64>();
    Complex::from_polar(power.sqrt(), phase)
}

/// Sample one fading realization of all six links.
///
/// The draw order is fixed (MBS-MU, MBS-SU, SBS-SU, SBS-MU, MBS-E, SBS-E);
/// it is part of the reproducibility contract.
pub fn sample_fading<R: Rng>(gains: &LinkGains, rng: &mut R) -> FadingDraw {
    FadingDraw {
        h_mbs_mu: rayleigh_coefficient(gains.mbs_mu, rng),
        h_mbs_su: rayleigh_coefficient(gains.mbs_su, rng),
        h_sbs_su: rayleigh_coefficient(gains.sbs_su, rng),
        h_sbs_mu: rayleigh_coefficient(gains.sbs_mu, rng),
        h_mbs_eve: rayleigh_coefficient(gains.mbs_eve, rng),
        h_sbs_eve: rayleigh_coefficient(gains.sbs_eve, rng),
    }
}

/// CDF of U = |h_num|^2 / (gamma |h_den|^2 + 1) at u >= 0, where the two
/// squared magnitudes are independent exponentials with means sigma2_num and
/// sigma2_den.
pub fn cdf_interference_ratio(
    u: f64,
    sigma2_num: f64,
    sigma2_den: f64,
    gamma: f64,
) -> Result<f64> {
    if u < 0.0 {
        return Err(NumericError::Domain(format!(
            "CDF argument must be nonnegative, got {u}"
        )));
    }
    if !(sigma2_num > 0.0 && sigma2_den > 0.0 && gamma > 0.0) {
        return Err(NumericError::Domain(
            "gains and gamma must be positive".into(),
        ));
    }
    Ok(1.0 - sigma2_num / (gamma * sigma2_den * u + sigma2_num) * (-u / sigma2_num).exp())
}

/// CDF of Z = |h_num|^2 / |h_den|^2 at z >= 0:
/// Pr(Z < z) = sigma2_den * z / (sigma2_num + sigma2_den * z).
pub fn cdf_plain_ratio(z: f64, sigma2_num: f64, sigma2_den: f64) -> Result<f64> {
    if z < 0.0 {
        return Err(NumericError::Domain(format!(
            "CDF argument must be nonnegative, got {z}"
        )));
    }
    if !(sigma2_num > 0.0 && sigma2_den > 0.0) {
        return Err(NumericError::Domain("gains must be positive".into()));
    }
    Ok(sigma2_den * z / (sigma2_num + sigma2_den * z))
}

/// PDF of the interference ratio U, the derivative of
/// [`cdf_interference_ratio`] in u.
pub fn pdf_interference_ratio(u: f64, sigma2_num: f64, sigma2_den: f64, gamma: f64) -> f64 {
    let gd = gamma * sigma2_den;
    let denom = gd * u + sigma2_num;
    (gd * sigma2_num / (denom * denom) + 1.0 / denom) * (-u / sigma2_num).exp()
}

/// PDF of the plain ratio Z, the derivative of [`cdf_plain_ratio`] in z.
pub fn pdf_plain_ratio(z: f64, sigma2_num: f64, sigma2_den: f64) -> f64 {
    let denom = sigma2_num + sigma2_den * z;
    sigma2_num * sigma2_den / (denom * denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_gains() -> LinkGains {
        LinkGains::new(1.0, 0.8, 2.0, 0.5, 1.5, 0.7).unwrap()
    }

    #[test]
    fn link_gain_identity_at_unit_distance() {
        assert_eq!(link_gain(1.0, 2.5, 1.0).unwrap(), 1.0);
        assert_eq!(link_gain(1.0, 0.0, 3.5).unwrap(), 3.5);
    }

    #[test]
    fn link_gain_reference_values() {
        // 300^{-2.5} = 1 / (300^2 * sqrt(300))
        let want = 1.0 / (90_000.0 * 300f64.sqrt());
        let got = link_gain(300.0, 2.5, 1.0).unwrap();
        assert!((got - want).abs() / want < 1e-14);
        assert!((got - 6.415e-7).abs() / got < 1e-4);
        // A tenth of the distance is 10^{2.5} = 316.23x the gain.
        let near = link_gain(30.0, 2.5, 1.0).unwrap();
        let ratio = near / got;
        assert!((ratio - 10f64.powf(2.5)).abs() / ratio < 1e-12);
        assert!((near - 2.0286e-4).abs() / near < 1e-4);
    }

    #[test]
    fn link_gain_domain_errors() {
        assert!(link_gain(0.0, 2.5, 1.0).is_err());
        assert!(link_gain(-5.0, 2.5, 1.0).is_err());
        assert!(link_gain(10.0, 2.5, 0.0).is_err());
        assert!(link_gain(10.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn gains_must_be_positive_and_finite() {
        assert!(LinkGains::new(1.0, 1.0, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(LinkGains::new(1.0, 1.0, 1.0, 1.0, f64::INFINITY, 1.0).is_err());
        assert!(test_gains().validate().is_ok());
    }

    #[test]
    fn fading_powers_have_configured_means() {
        let gains = test_gains();
        let mut rng = RngStream::new(9, 0).rng();
        let n = 1_000_000;
        let mut sums = [0.0f64; 6];
        for _ in 0..n {
            let d = sample_fading(&gains, &mut rng);
            for (slot, h) in sums.iter_mut().zip([
                d.h_mbs_mu, d.h_mbs_su, d.h_sbs_su, d.h_sbs_mu, d.h_mbs_eve, d.h_sbs_eve,
            ]) {
                *slot += h.norm_sq();
            }
        }
        let want = [
            gains.mbs_mu, gains.mbs_su, gains.sbs_su, gains.sbs_mu, gains.mbs_eve, gains.sbs_eve,
        ];
        for (sum, want) in sums.iter().zip(want) {
            let mean = sum / n as f64;
            // stderr of an exponential mean is sigma2/sqrt(n)
            let tol = 4.0 * want / (n as f64).sqrt();
            assert!(
                (mean - want).abs() < tol,
                "mean {mean} deviates from {want} beyond 4 sigma"
            );
        }
    }

    #[test]
    fn fading_power_passes_ks_test_against_exponential() {
        let gains = test_gains();
        let mut rng = RngStream::new(11, 3).rng();
        let n = 1_000_000usize;
        let mut powers: Vec<f64> = (0..n)
            .map(|_| sample_fading(&gains, &mut rng).h_mbs_mu.norm_sq())
            .collect();
        powers.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks = 0.0f64;
        for (i, p) in powers.iter().enumerate() {
            let cdf = 1.0 - (-p / gains.mbs_mu).exp();
            let hi = (i + 1) as f64 / n as f64 - cdf;
            let lo = cdf - i as f64 / n as f64;
            ks = ks.max(hi.abs()).max(lo.abs());
        }
        // 0.01-significance KS threshold is 1.63/sqrt(n) ~= 0.00163.
        assert!(ks < 0.002, "KS statistic {ks} too large");
    }

    #[test]
    fn fading_phases_are_uniform() {
        let gains = test_gains();
        let mut rng = RngStream::new(4, 8).rng();
        let n = 200_000;
        let (mut c, mut s) = (0.0f64, 0.0f64);
        for _ in 0..n {
            let h = sample_fading(&gains, &mut rng).h_sbs_eve;
            let arg = h.arg();
            c += arg.cos();
            s += arg.sin();
        }
        let tol = 4.0 / (n as f64).sqrt() * 0.8;
        assert!((c / n as f64).abs() < tol);
        assert!((s / n as f64).abs() < tol);
    }

    #[test]
    fn identical_streams_reproduce_identical_draws() {
        let gains = test_gains();
        let stream = RngStream::new(123, 456);
        let mut a = stream.rng();
        let mut b = stream.rng();
        for _ in 0..100 {
            assert_eq!(sample_fading(&gains, &mut a), sample_fading(&gains, &mut b));
        }
    }

    #[test]
    fn distinct_stream_indices_decorrelate() {
        let gains = test_gains();
        let mut a = RngStream::new(123, 0).rng();
        let mut b = RngStream::new(123, 1).rng();
        let da = sample_fading(&gains, &mut a);
        let db = sample_fading(&gains, &mut b);
        assert_ne!(da, db);
        let child = RngStream::new(123, 0).child(7);
        assert_ne!(child, RngStream::new(123, 0).child(8));
    }

    #[test]
    fn interference_ratio_cdf_endpoints_and_value() {
        assert_eq!(cdf_interference_ratio(0.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(cdf_interference_ratio(1e9, 1.0, 1.0, 1.0).unwrap() > 0.999999);
        // sigma_num = sigma_den = gamma = 1, u = 1: 1 - e^{-1}/2.
        let got = cdf_interference_ratio(1.0, 1.0, 1.0, 1.0).unwrap();
        let want = 1.0 - (-1.0f64).exp() / 2.0;
        assert!((got - want).abs() < 1e-15);
        assert!(cdf_interference_ratio(-0.1, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn interference_ratio_cdf_matches_monte_carlo() {
        let mut rng = RngStream::new(5, 0).rng();
        let n = 2_000_000;
        let (s_num, s_den, gamma) = (1.0, 1.0, 1.0);
        let mut hits = 0u64;
        for _ in 0..n {
            let num = -s_num * (1.0 - rng.gen::<f64>()).ln();
            let den = -s_den * (1.0 - rng.gen::<f64>()).ln();
            if num / (gamma * den + 1.0) < 1.0 {
                hits += 1;
            }
        }
        let p = hits as f64 / n as f64;
        let want = cdf_interference_ratio(1.0, s_num, s_den, gamma).unwrap();
        let stderr = (want * (1.0 - want) / n as f64).sqrt();
        assert!((p - want).abs() < 4.0 * stderr);
    }

    #[test]
    fn plain_ratio_cdf_values() {
        assert_eq!(cdf_plain_ratio(0.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(cdf_plain_ratio(1.0, 1.0, 1.0).unwrap(), 0.5);
        // numerator mean 2, denominator mean 1 at z = 1: 1/3.
        let got = cdf_plain_ratio(1.0, 2.0, 1.0).unwrap();
        assert!((got - 1.0 / 3.0).abs() < 1e-15);
        assert!(cdf_plain_ratio(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn plain_ratio_cdf_matches_monte_carlo() {
        let mut rng = RngStream::new(6, 0).rng();
        let n = 2_000_000;
        let mut hits = 0u64;
        for _ in 0..n {
            let num = -2.0 * (1.0 - rng.gen::<f64>()).ln();
            let den = -(1.0 - rng.gen::<f64>()).ln();
            if num / den < 1.0 {
                hits += 1;
            }
        }
        let p = hits as f64 / n as f64;
        let stderr = (p * (1.0 - p) / n as f64).sqrt();
        assert!((p - 1.0 / 3.0).abs() < 4.0 * stderr);
    }

    #[test]
    fn cdfs_are_monotone_from_zero_to_one() {
        let grid: Vec<f64> = (0..200).map(|k| k as f64 * 0.25).collect();
        let mut prev_i = -1.0;
        let mut prev_p = -1.0;
        for &u in &grid {
            let i = cdf_interference_ratio(u, 0.7, 1.3, 2.0).unwrap();
            let p = cdf_plain_ratio(u, 0.7, 1.3).unwrap();
            assert!((0.0..=1.0).contains(&i) && i >= prev_i);
            assert!((0.0..=1.0).contains(&p) && p >= prev_p);
            prev_i = i;
            prev_p = p;
        }
        assert!(cdf_interference_ratio(1e12, 0.7, 1.3, 2.0).unwrap() > 1.0 - 1e-9);
        assert!(cdf_plain_ratio(1e12, 0.7, 1.3).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn pdfs_match_central_difference_of_cdfs() {
        let h = 1e-5;
        for u in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let num_d = (cdf_interference_ratio(u + h, 0.9, 1.1, 1.7).unwrap()
                - cdf_interference_ratio(u - h, 0.9, 1.1, 1.7).unwrap())
                / (2.0 * h);
            let pdf = pdf_interference_ratio(u, 0.9, 1.1, 1.7);
            assert!((num_d - pdf).abs() < 1e-6, "interference pdf off at {u}");

            let num_d = (cdf_plain_ratio(u + h, 0.9, 1.1).unwrap()
                - cdf_plain_ratio(u - h, 0.9, 1.1).unwrap())
                / (2.0 * h);
            let pdf = pdf_plain_ratio(u, 0.9, 1.1);
            assert!((num_d - pdf).abs() < 1e-6, "plain ratio pdf off at {u}");
        }
    }

    #[test]
    fn geometry_produces_study_default_gains() {
        let geometry = LinkGeometry {
            mbs_mu: LinkPath::new(300.0, 2.5, 1.0),
            mbs_su: LinkPath::new(300.0, 3.0, 1.0),
            sbs_su: LinkPath::new(30.0, 2.5, 1.0),
            sbs_mu: LinkPath::new(300.0, 3.0, 1.0),
            mbs_eve: LinkPath::new(300.0, 2.5, 1.0),
            sbs_eve: LinkPath::new(300.0, 2.5, 1.0),
        };
        let gains = geometry.gains().unwrap();
        assert!((gains.mbs_mu - 6.415e-7).abs() / gains.mbs_mu < 1e-4);
        assert!((gains.sbs_mu - 3.7037e-8).abs() / gains.sbs_mu < 1e-4);
        assert!((gains.sbs_su - 2.0286e-4).abs() / gains.sbs_su < 1e-4);
        assert_eq!(gains.mbs_eve, gains.mbs_mu);
    }
}
