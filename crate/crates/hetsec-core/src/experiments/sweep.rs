//! Deterministic sweep execution.

use super::config::{SweepAxis, SweepSpec};
use crate::asymptotics;
use crate::channel_model::{LinkGains, RngStream};
use crate::error::NumericError;
use crate::schemes_analytic::{self, Cell, Scheme, SystemConfig};
use crate::schemes_montecarlo;
use rayon::prelude::*;
use std::time::Instant;

/// Evaluation method of one result row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Mc,
    LowerBound,
    UpperBound,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Mc => "mc",
            Method::LowerBound => "lower_bound",
            Method::UpperBound => "upper_bound",
        }
    }
}

/// One sweep result: a (axis value, scheme, method) cell of the output CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub axis_value: f64,
    pub scheme: Scheme,
    pub method: Method,
    pub p_macro: Option<f64>,
    pub p_small: Option<f64>,
    pub p_overall: Option<f64>,
    /// Standard error of the overall estimate; present only for MC rows.
    pub stderr: Option<f64>,
    pub wall_time_ms: Option<f64>,
    pub error: Option<String>,
}

/// Sweep output plus bookkeeping for exit-status decisions.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<ResultRow>,
    /// Diagnostics that apply to the whole sweep (regime warnings etc).
    pub notes: Vec<String>,
}

impl SweepOutcome {
    /// True when every row carries an error (exit code 3 for the CLI).
    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.error.is_some())
    }
}

fn apply_axis(axis: SweepAxis, value: f64, base: &SystemConfig) -> SystemConfig {
    let mut cfg = *base;
    match axis {
        SweepAxis::GammaMacroDb => cfg.snr_macro = 10f64.powf(value / 10.0),
        SweepAxis::SecrecyRate => {
            cfg.rate_macro = value;
            cfg.rate_small = value;
        }
        SweepAxis::Beta => cfg.smr = value,
        SweepAxis::AlphaSplit => cfg.spectrum_split = value,
    }
    cfg
}

fn scheme_tag(scheme: Scheme) -> u64 {
    match scheme {
        Scheme::Oss => 0,
        Scheme::IlNoss => 1,
        Scheme::IcNoss => 2,
    }
}

/// Execute the sweep. Rows come back ordered by axis value, then scheme,
/// then method; per-point failures are recorded in the row's error column
/// without aborting the sweep. Given the same spec and seed the output is
/// identical regardless of thread count.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome, NumericError> {
    let gains = spec.gain_source.gains()?;

    let mut notes = Vec::new();
    if spec.schemes.contains(&Scheme::IcNoss) {
        if let Some(warning) = schemes_analytic::ic_small_regime_diagnostic(&gains) {
            notes.push(warning);
        }
    }

    // One task per (point, scheme); the scheme's rows (analytic, mc, bounds)
    // are produced together so each task owns an independent seed lineage.
    let mut tasks = Vec::new();
    for (point_idx, &axis_value) in spec.values.iter().enumerate() {
        for &scheme in &spec.schemes {
            tasks.push((point_idx, axis_value, scheme));
        }
    }

    let rows: Vec<Vec<ResultRow>> = tasks
        .par_iter()
        .map(|&(point_idx, axis_value, scheme)| {
            let cfg = apply_axis(spec.axis, axis_value, &spec.base);
            let stream = RngStream::new(spec.seed, 0)
                .child(point_idx as u64)
                .child(scheme_tag(scheme));
            run_point(spec, &cfg, &gains, scheme, axis_value, stream)
        })
        .collect();

    Ok(SweepOutcome {
        rows: rows.into_iter().flatten().collect(),
        notes,
    })
}

fn run_point(
    spec: &SweepSpec,
    cfg: &SystemConfig,
    gains: &LinkGains,
    scheme: Scheme,
    axis_value: f64,
    stream: RngStream,
) -> Vec<ResultRow> {
    let mut rows = Vec::new();

    if spec.methods.analytic() {
        let started = Instant::now();
        let macro_res = schemes_analytic::sop(scheme, Cell::Macro, cfg, gains);
        let small_res = schemes_analytic::sop(scheme, Cell::Small, cfg, gains);
        rows.push(assemble_row(
            spec,
            axis_value,
            scheme,
            Method::Analytic,
            macro_res.map(|p| (p, None)),
            small_res.map(|p| (p, None)),
            started,
        ));
    }

    if spec.methods.mc() {
        let started = Instant::now();
        // The IC macro cell simulates the exact pre-asymptotic outage event
        // directly; the other cells go through the per-draw capacities. The
        // two routes define the same event, the direct form is just the one
        // the bound comparisons are stated for (and cheaper).
        let macro_res = if scheme == Scheme::IcNoss {
            schemes_montecarlo::estimate_sop_exact_ic_macro(
                cfg,
                gains,
                spec.mc_samples,
                stream.child(0),
            )
        } else {
            schemes_montecarlo::estimate_sop(
                scheme,
                Cell::Macro,
                cfg,
                gains,
                spec.mc_samples,
                stream.child(0),
            )
        }
        .map(|e| (e.p_hat, Some(e.stderr)));
        let small_res = schemes_montecarlo::estimate_sop(
            scheme,
            Cell::Small,
            cfg,
            gains,
            spec.mc_samples,
            stream.child(1),
        )
        .map(|e| (e.p_hat, Some(e.stderr)));
        rows.push(assemble_row(
            spec,
            axis_value,
            scheme,
            Method::Mc,
            macro_res,
            small_res,
            started,
        ));
    }

    if spec.ic_macro_bounds && scheme == Scheme::IcNoss {
        for (method, pick) in [
            (Method::LowerBound, 0usize),
            (Method::UpperBound, 1usize),
        ] {
            let started = Instant::now();
            let row = match asymptotics::ic_macro_bounds(cfg, gains) {
                Ok(bounds) => ResultRow {
                    axis_value,
                    scheme,
                    method,
                    p_macro: Some(if pick == 0 { bounds.0 } else { bounds.1 }),
                    p_small: None,
                    p_overall: None,
                    stderr: None,
                    wall_time_ms: timing(spec, started),
                    error: None,
                },
                Err(e) => ResultRow {
                    axis_value,
                    scheme,
                    method,
                    p_macro: None,
                    p_small: None,
                    p_overall: None,
                    stderr: None,
                    wall_time_ms: timing(spec, started),
                    error: Some(e.to_string()),
                },
            };
            rows.push(row);
        }
    }

    rows
}

type CellResult = Result<(f64, Option<f64>), NumericError>;

fn assemble_row(
    spec: &SweepSpec,
    axis_value: f64,
    scheme: Scheme,
    method: Method,
    macro_res: CellResult,
    small_res: CellResult,
    started: Instant,
) -> ResultRow {
    let mut row = ResultRow {
        axis_value,
        scheme,
        method,
        p_macro: None,
        p_small: None,
        p_overall: None,
        stderr: None,
        wall_time_ms: None,
        error: None,
    };
    let mut errors = Vec::new();
    let mut macro_value = None;
    let mut small_value = None;
    match macro_res {
        Ok((p, se)) => {
            row.p_macro = Some(p);
            macro_value = Some((p, se));
        }
        Err(e) => errors.push(format!("macro: {e}")),
    }
    match small_res {
        Ok((p, se)) => {
            row.p_small = Some(p);
            small_value = Some((p, se));
        }
        Err(e) => errors.push(format!("small: {e}")),
    }
    if let (Some((pm, sem)), Some((ps, ses))) = (macro_value, small_value) {
        match schemes_analytic::overall_sop(pm, ps, spec.combiner) {
            Ok(p) => {
                row.p_overall = Some(p);
                // Propagate sampling error through the combiner for MC rows.
                if let (Some(sem), Some(ses)) = (sem, ses) {
                    let var = match spec.combiner {
                        schemes_analytic::OverallCombiner::Product => {
                            (ps * sem).powi(2) + (pm * ses).powi(2)
                        }
                        schemes_analytic::OverallCombiner::Mean => {
                            0.25 * (sem * sem + ses * ses)
                        }
                    };
                    row.stderr = Some(var.sqrt());
                }
            }
            Err(e) => errors.push(format!("overall: {e}")),
        }
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row.wall_time_ms = timing(spec, started);
    row
}

fn timing(spec: &SweepSpec, started: Instant) -> Option<f64> {
    spec.timing
        .then(|| started.elapsed().as_secs_f64() * 1e3)
}
