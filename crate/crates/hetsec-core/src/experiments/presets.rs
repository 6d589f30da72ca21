//! Ready-made sweep specifications reproducing the numerical study's
//! figures. Each preset runs without further configuration; samples, seed
//! and output destination can still be overridden on the command line.

use super::config::{default_config, default_geometry, GainSource, SweepAxis, SweepMethods, SweepSpec};
use crate::channel_model::LinkGains;
use crate::schemes_analytic::{OverallCombiner, Scheme};

pub fn preset_names() -> &'static [&'static str] {
    &["fig2", "fig3", "fig4", "fig5", "fig6"]
}

/// Look up a preset by name.
pub fn preset(name: &str) -> Option<SweepSpec> {
    let spec = match name {
        // Macro-cell outage of the interference-canceled scheme against its
        // high-SNR lower/upper bounds, on the direct gain set with a shadowed
        // cross-interference link.
        "fig2" => SweepSpec {
            axis: SweepAxis::GammaMacroDb,
            values: step_range(10.0, 5.0, 60.0),
            base: default_config(),
            gain_source: GainSource::Direct(LinkGains {
                mbs_mu: 1.0,
                mbs_su: 1.0,
                sbs_su: 1.0,
                sbs_mu: 0.2,
                mbs_eve: 1.0,
                sbs_eve: 1.0,
            }),
            schemes: vec![Scheme::IcNoss],
            methods: SweepMethods::Both,
            combiner: OverallCombiner::Product,
            mc_samples: 10_000_000,
            seed: 42,
            ic_macro_bounds: true,
            timing: false,
        },
        // Overall (product) secrecy outage versus SNR for all three schemes.
        // The range spans the IC/IL crossover (between 85 and 90 dB) and the
        // OSS/IL floors.
        "fig3" => gamma_sweep(OverallCombiner::Product, 60.0),
        // Overall (product) secrecy outage versus the common secrecy rate.
        "fig4" => rate_sweep(OverallCombiner::Product),
        // Normalized-sum (mean) secrecy outage versus SNR. Starts at 80 dB:
        // below that the cancellation scheme's power overhead leaves it above
        // the interference-limited baseline.
        "fig5" => gamma_sweep(OverallCombiner::Mean, 80.0),
        // Normalized-sum (mean) secrecy outage versus the secrecy rate.
        "fig6" => rate_sweep(OverallCombiner::Mean),
        _ => return None,
    };
    Some(spec)
}

fn step_range(start: f64, step: f64, stop: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let v = start + step * k as f64;
        if v > stop + 1e-9 {
            break;
        }
        out.push(v);
        k += 1;
    }
    out
}

fn gamma_sweep(combiner: OverallCombiner, start_db: f64) -> SweepSpec {
    SweepSpec {
        axis: SweepAxis::GammaMacroDb,
        values: step_range(start_db, 5.0, 140.0),
        base: default_config(),
        gain_source: GainSource::Geometry(default_geometry()),
        schemes: vec![Scheme::Oss, Scheme::IlNoss, Scheme::IcNoss],
        methods: SweepMethods::Both,
        combiner,
        mc_samples: 1_000_000,
        seed: 42,
        ic_macro_bounds: false,
        timing: false,
    }
}

fn rate_sweep(combiner: OverallCombiner) -> SweepSpec {
    SweepSpec {
        axis: SweepAxis::SecrecyRate,
        values: step_range(0.2, 0.2, 3.0),
        base: default_config(),
        gain_source: GainSource::Geometry(default_geometry()),
        schemes: vec![Scheme::Oss, Scheme::IlNoss, Scheme::IcNoss],
        methods: SweepMethods::Both,
        combiner,
        mc_samples: 1_000_000,
        seed: 42,
        ic_macro_bounds: false,
        timing: false,
    }
}
