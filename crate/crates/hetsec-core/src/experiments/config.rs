//! Line-oriented `key = value` sweep configuration.
//!
//! Grammar (see the repository README for the full reference):
//!
//! ```text
//! # comment
//! axis      = gamma_M_dB            # gamma_M_dB | secrecy_rate | beta | alpha_split
//! values    = 60:5:140              # or an explicit comma list
//! schemes   = OSS, IL, IC
//! methods   = both                  # analytic | mc | both
//! combiner  = product               # product | mean
//! mc_samples = 1000000
//! seed      = 42
//! gamma_M_dB = 100                  # fixed-config fields
//! beta = 0.5
//! alpha = 0.5
//! rate_macro = 1.0
//! rate_small = 1.0
//!
//! [geometry]                        # or a [gains] section; not both
//! d_mm = 300
//! pathloss_mm = 2.5
//! delta2_mm = 1.0
//! ...                               # links: mm, ms, ss, sm, me, se
//! ```
//!
//! Unknown keys are rejected. Omitted fields fall back to the defaults of
//! the numerical study: 300 m distances (30 m for the small cell's own
//! link), path-loss exponent 2.5 (3.0 on the cross-interference links),
//! unit small-scale variance, gamma_M = 100 dB, rates 1 bit/s/Hz,
//! alpha = 0.5 and beta = 0.5.

use crate::channel_model::{LinkGains, LinkGeometry, LinkPath};
use crate::schemes_analytic::{OverallCombiner, Scheme, SystemConfig};
use thiserror::Error;

/// Configuration / parse failure, with a line number when it names one.
#[derive(Debug, Clone, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// The swept axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    GammaMacroDb,
    SecrecyRate,
    Beta,
    AlphaSplit,
}

impl SweepAxis {
    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::GammaMacroDb => "gamma_M_dB",
            SweepAxis::SecrecyRate => "secrecy_rate",
            SweepAxis::Beta => "beta",
            SweepAxis::AlphaSplit => "alpha_split",
        }
    }
}

/// Which evaluation methods run per sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMethods {
    Analytic,
    Mc,
    Both,
}

impl SweepMethods {
    pub fn analytic(&self) -> bool {
        matches!(self, SweepMethods::Analytic | SweepMethods::Both)
    }
    pub fn mc(&self) -> bool {
        matches!(self, SweepMethods::Mc | SweepMethods::Both)
    }
}

/// Where the average channel gains come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainSource {
    Geometry(LinkGeometry),
    Direct(LinkGains),
}

impl GainSource {
    pub fn gains(&self) -> Result<LinkGains, crate::error::NumericError> {
        match self {
            GainSource::Geometry(geometry) => geometry.gains(),
            GainSource::Direct(gains) => {
                gains.validate()?;
                Ok(*gains)
            }
        }
    }
}

/// A fully validated sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub base: SystemConfig,
    pub gain_source: GainSource,
    pub schemes: Vec<Scheme>,
    pub methods: SweepMethods,
    pub combiner: OverallCombiner,
    pub mc_samples: u64,
    pub seed: u64,
    /// Also emit the high-SNR lower/upper bound rows for the IC macro cell
    /// (used by the bound-comparison preset).
    pub ic_macro_bounds: bool,
    /// Record per-row wall-clock time. Off by default so repeated runs with
    /// the same seed stay byte-identical.
    pub timing: bool,
}

/// Default geometry of the numerical study.
pub fn default_geometry() -> LinkGeometry {
    LinkGeometry {
        mbs_mu: LinkPath::new(300.0, 2.5, 1.0),
        mbs_su: LinkPath::new(300.0, 3.0, 1.0),
        sbs_su: LinkPath::new(30.0, 2.5, 1.0),
        sbs_mu: LinkPath::new(300.0, 3.0, 1.0),
        mbs_eve: LinkPath::new(300.0, 2.5, 1.0),
        sbs_eve: LinkPath::new(300.0, 2.5, 1.0),
    }
}

/// Default operating point of the numerical study (gamma_M given in dB).
pub fn default_config() -> SystemConfig {
    SystemConfig {
        snr_macro: 10f64.powf(100.0 / 10.0),
        smr: 0.5,
        spectrum_split: 0.5,
        rate_macro: 1.0,
        rate_small: 1.0,
    }
}

impl SweepSpec {
    /// Resolve the gains and run all validity checks that do not depend on
    /// the axis position.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.values.is_empty() {
            return Err(ConfigError::Invalid("values list is empty".into()));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ConfigError::Invalid(
                "axis values must be strictly increasing".into(),
            ));
        }
        if self.schemes.is_empty() {
            return Err(ConfigError::Invalid("schemes list is empty".into()));
        }
        if self.methods.mc() && self.mc_samples < 1_000 {
            return Err(ConfigError::Invalid(format!(
                "mc_samples must be >= 1000 when Monte-Carlo is enabled, got {}",
                self.mc_samples
            )));
        }
        let gains = self
            .gain_source
            .gains()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.base
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        // Interference cancellation must stay feasible across the whole
        // sweep when the IC scheme is selected.
        if self.schemes.contains(&Scheme::IcNoss) {
            let beta_max = match self.axis {
                SweepAxis::Beta => self
                    .values
                    .iter()
                    .cloned()
                    .fold(f64::NEG_INFINITY, f64::max),
                _ => self.base.smr,
            };
            let bound = gains.mbs_mu / gains.sbs_mu;
            if beta_max > bound {
                return Err(ConfigError::Invalid(format!(
                    "IC-NOSS infeasible: beta reaches {beta_max} but the \
                     cancellation design requires beta <= sigma2_Mm/sigma2_Sm \
                     = {bound}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct Builder {
    axis: Option<SweepAxis>,
    values: Option<Vec<f64>>,
    schemes: Option<Vec<Scheme>>,
    methods: Option<SweepMethods>,
    combiner: Option<OverallCombiner>,
    mc_samples: Option<u64>,
    seed: Option<u64>,
    gamma_db: Option<f64>,
    beta: Option<f64>,
    alpha: Option<f64>,
    rate_macro: Option<f64>,
    rate_small: Option<f64>,
    geometry: Option<LinkGeometry>,
    gains: Option<PartialGains>,
}

#[derive(Default, Clone, Copy)]
struct PartialGains {
    mm: Option<f64>,
    ms: Option<f64>,
    ss: Option<f64>,
    sm: Option<f64>,
    me: Option<f64>,
    se: Option<f64>,
}

/// Parse a sweep configuration document.
pub fn parse_config(text: &str) -> Result<SweepSpec, ConfigError> {
    let mut b = Builder::default();
    let mut section: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, "unterminated section header"))?
                .trim()
                .to_ascii_lowercase();
            match name.as_str() {
                "geometry" => {
                    if b.gains.is_some() {
                        return Err(err(line_no, "geometry and gains sections are mutually exclusive"));
                    }
                    b.geometry.get_or_insert_with(default_geometry);
                }
                "gains" => {
                    if b.geometry.is_some() {
                        return Err(err(line_no, "geometry and gains sections are mutually exclusive"));
                    }
                    b.gains.get_or_insert_with(PartialGains::default);
                }
                other => return Err(err(line_no, &format!("unknown section [{other}]"))),
            }
            section = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "expected `key = value`"))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        match section.as_deref() {
            None => parse_top_level(&mut b, &key, value, line_no)?,
            Some("geometry") => {
                let geom = b.geometry.as_mut().expect("section opened above");
                parse_geometry_key(geom, &key, value, line_no)?;
            }
            Some("gains") => {
                let gains = b.gains.as_mut().expect("section opened above");
                parse_gain_key(gains, &key, value, line_no)?;
            }
            Some(_) => unreachable!("unknown sections rejected at the header"),
        }
    }

    finish(b)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn err(line: usize, message: &str) -> ConfigError {
    ConfigError::Parse {
        line,
        message: message.to_string(),
    }
}

fn parse_f64(value: &str, line: usize) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| err(line, &format!("`{value}` is not a number")))
}

fn parse_u64(value: &str, line: usize) -> Result<u64, ConfigError> {
    // Accept scientific notation for counts (1e6 and the like).
    if let Ok(v) = value.parse::<u64>() {
        return Ok(v);
    }
    let as_float = parse_f64(value, line)?;
    if as_float >= 0.0 && as_float.fract() == 0.0 && as_float <= u64::MAX as f64 {
        Ok(as_float as u64)
    } else {
        Err(err(line, &format!("`{value}` is not a nonnegative integer")))
    }
}

fn parse_values(value: &str, line: usize) -> Result<Vec<f64>, ConfigError> {
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(err(line, "range form is start:step:stop"));
        }
        let start = parse_f64(parts[0].trim(), line)?;
        let step = parse_f64(parts[1].trim(), line)?;
        let stop = parse_f64(parts[2].trim(), line)?;
        if !(step > 0.0) {
            return Err(err(line, "range step must be positive"));
        }
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let v = start + step * k as f64;
            if v > stop + 1e-9 * step {
                break;
            }
            out.push(v);
            k += 1;
            if k > 1_000_000 {
                return Err(err(line, "range produces more than 1e6 points"));
            }
        }
        Ok(out)
    } else {
        value
            .split(',')
            .map(|v| parse_f64(v.trim(), line))
            .collect()
    }
}

fn parse_top_level(
    b: &mut Builder,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(), ConfigError> {
    match key {
        "axis" => {
            b.axis = Some(match value.to_ascii_lowercase().as_str() {
                "gamma_m_db" => SweepAxis::GammaMacroDb,
                "secrecy_rate" => SweepAxis::SecrecyRate,
                "beta" => SweepAxis::Beta,
                "alpha_split" => SweepAxis::AlphaSplit,
                other => return Err(err(line, &format!("unknown axis `{other}`"))),
            })
        }
        "values" => b.values = Some(parse_values(value, line)?),
        "schemes" => {
            let mut schemes = Vec::new();
            for part in value.split(',') {
                schemes.push(match part.trim().to_ascii_uppercase().as_str() {
                    "OSS" => Scheme::Oss,
                    "IL" | "IL-NOSS" | "ILNOSS" => Scheme::IlNoss,
                    "IC" | "IC-NOSS" | "ICNOSS" => Scheme::IcNoss,
                    other => return Err(err(line, &format!("unknown scheme `{other}`"))),
                });
            }
            b.schemes = Some(schemes);
        }
        "methods" => {
            b.methods = Some(match value.to_ascii_lowercase().as_str() {
                "analytic" => SweepMethods::Analytic,
                "mc" => SweepMethods::Mc,
                "both" => SweepMethods::Both,
                other => return Err(err(line, &format!("unknown methods value `{other}`"))),
            })
        }
        "combiner" => {
            b.combiner = Some(match value.to_ascii_lowercase().as_str() {
                "product" => OverallCombiner::Product,
                "mean" => OverallCombiner::Mean,
                other => return Err(err(line, &format!("unknown combiner `{other}`"))),
            })
        }
        "mc_samples" => b.mc_samples = Some(parse_u64(value, line)?),
        "seed" => b.seed = Some(parse_u64(value, line)?),
        "gamma_m_db" => b.gamma_db = Some(parse_f64(value, line)?),
        "beta" => b.beta = Some(parse_f64(value, line)?),
        "alpha" | "alpha_split" => b.alpha = Some(parse_f64(value, line)?),
        "rate_macro" => b.rate_macro = Some(parse_f64(value, line)?),
        "rate_small" => b.rate_small = Some(parse_f64(value, line)?),
        "secrecy_rate" => {
            let r = parse_f64(value, line)?;
            b.rate_macro = Some(r);
            b.rate_small = Some(r);
        }
        other => return Err(err(line, &format!("unknown key `{other}`"))),
    }
    Ok(())
}

fn parse_geometry_key(
    geom: &mut LinkGeometry,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(), ConfigError> {
    let v = parse_f64(value, line)?;
    let (field, link) = key
        .split_once('_')
        .ok_or_else(|| err(line, &format!("unknown geometry key `{key}`")))?;
    let path = match link {
        "mm" => &mut geom.mbs_mu,
        "ms" => &mut geom.mbs_su,
        "ss" => &mut geom.sbs_su,
        "sm" => &mut geom.sbs_mu,
        "me" => &mut geom.mbs_eve,
        "se" => &mut geom.sbs_eve,
        other => return Err(err(line, &format!("unknown link `{other}`"))),
    };
    match field {
        "d" => path.distance_m = v,
        "pathloss" => path.path_loss_exp = v,
        "delta2" => path.fading_var = v,
        other => return Err(err(line, &format!("unknown geometry field `{other}`"))),
    }
    Ok(())
}

fn parse_gain_key(
    gains: &mut PartialGains,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(), ConfigError> {
    let v = parse_f64(value, line)?;
    let slot = match key {
        "sigma2_mm" => &mut gains.mm,
        "sigma2_ms" => &mut gains.ms,
        "sigma2_ss" => &mut gains.ss,
        "sigma2_sm" => &mut gains.sm,
        "sigma2_me" => &mut gains.me,
        "sigma2_se" => &mut gains.se,
        other => return Err(err(line, &format!("unknown gain key `{other}`"))),
    };
    *slot = Some(v);
    Ok(())
}

fn finish(b: Builder) -> Result<SweepSpec, ConfigError> {
    let axis = b.axis.unwrap_or(SweepAxis::GammaMacroDb);
    let values = b.values.unwrap_or_else(|| match axis {
        SweepAxis::GammaMacroDb => (12..=28).map(|k| k as f64 * 5.0).collect(),
        SweepAxis::SecrecyRate => (1..=15).map(|k| k as f64 * 0.2).collect(),
        SweepAxis::Beta => (1..=10).map(|k| k as f64 * 0.1).collect(),
        SweepAxis::AlphaSplit => (1..=9).map(|k| k as f64 * 0.1).collect(),
    });
    let base_defaults = default_config();
    let base = SystemConfig {
        snr_macro: 10f64.powf(b.gamma_db.unwrap_or(100.0) / 10.0),
        smr: b.beta.unwrap_or(base_defaults.smr),
        spectrum_split: b.alpha.unwrap_or(base_defaults.spectrum_split),
        rate_macro: b.rate_macro.unwrap_or(base_defaults.rate_macro),
        rate_small: b.rate_small.unwrap_or(base_defaults.rate_small),
    };
    let gain_source = if let Some(p) = b.gains {
        let all = [p.mm, p.ms, p.ss, p.sm, p.me, p.se];
        if all.iter().any(|g| g.is_none()) {
            return Err(ConfigError::Invalid(
                "a [gains] section must set all six sigma2_* values".into(),
            ));
        }
        GainSource::Direct(LinkGains {
            mbs_mu: p.mm.unwrap(),
            mbs_su: p.ms.unwrap(),
            sbs_su: p.ss.unwrap(),
            sbs_mu: p.sm.unwrap(),
            mbs_eve: p.me.unwrap(),
            sbs_eve: p.se.unwrap(),
        })
    } else {
        GainSource::Geometry(b.geometry.unwrap_or_else(default_geometry))
    };
    let spec = SweepSpec {
        axis,
        values,
        base,
        gain_source,
        schemes: b
            .schemes
            .unwrap_or_else(|| vec![Scheme::Oss, Scheme::IlNoss, Scheme::IcNoss]),
        methods: b.methods.unwrap_or(SweepMethods::Both),
        combiner: b.combiner.unwrap_or(OverallCombiner::Product),
        mc_samples: b.mc_samples.unwrap_or(1_000_000),
        seed: b.seed.unwrap_or(42),
        ic_macro_bounds: false,
        timing: false,
    };
    spec.validate()?;
    Ok(spec)
}
