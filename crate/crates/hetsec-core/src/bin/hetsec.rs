//! Experiment CLI: runs the figure presets or a custom sweep configuration
//! and writes CSV.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 when every sweep
//! point failed numerically.

use clap::{Args, Parser, Subcommand};
use hetsec_core::experiments::{self, SweepOutcome, SweepSpec};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hetsec",
    about = "Secrecy outage experiments for spectrum-sharing heterogeneous networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// IC-NOSS macro outage vs its high-SNR bounds (direct gain set).
    Fig2(RunArgs),
    /// Overall (product) secrecy outage vs SNR, all three schemes.
    Fig3(RunArgs),
    /// Overall (product) secrecy outage vs secrecy rate.
    Fig4(RunArgs),
    /// Normalized-sum (mean) secrecy outage vs SNR.
    Fig5(RunArgs),
    /// Normalized-sum (mean) secrecy outage vs secrecy rate.
    Fig6(RunArgs),
    /// Run a sweep described by a configuration file.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Monte-Carlo samples per point (overrides the preset).
    #[arg(long)]
    samples: Option<u64>,
    /// Base RNG seed (overrides the preset).
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Record per-row wall-clock time. Off by default so identical seeds
    /// produce byte-identical CSVs.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep configuration file (key = value lines; see the README).
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    run: RunArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (spec, run) = match build_spec(cli.command) {
        Ok(pair) => pair,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };

    if let Some(threads) = run.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: failed to size the thread pool: {e}");
            return ExitCode::from(2);
        }
    }

    let outcome = match experiments::run_sweep(&spec) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    for note in &outcome.notes {
        eprintln!("warning: {note}");
    }
    if let Err(e) = write_csv(&outcome, run.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    if outcome.all_failed() {
        eprintln!("error: every sweep point failed; see the error column");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}

fn build_spec(command: Command) -> Result<(SweepSpec, RunArgs), String> {
    let (mut spec, run) = match command {
        Command::Fig2(run) => (experiments::preset("fig2").unwrap(), run),
        Command::Fig3(run) => (experiments::preset("fig3").unwrap(), run),
        Command::Fig4(run) => (experiments::preset("fig4").unwrap(), run),
        Command::Fig5(run) => (experiments::preset("fig5").unwrap(), run),
        Command::Fig6(run) => (experiments::preset("fig6").unwrap(), run),
        Command::Sweep(args) => {
            let text = fs::read_to_string(&args.config)
                .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
            let spec = experiments::parse_config(&text).map_err(|e| e.to_string())?;
            (spec, args.run)
        }
    };
    if let Some(samples) = run.samples {
        spec.mc_samples = samples;
    }
    if let Some(seed) = run.seed {
        spec.seed = seed;
    }
    spec.timing = run.timing;
    spec.validate().map_err(|e| e.to_string())?;
    Ok((spec, run))
}

fn write_csv(outcome: &SweepOutcome, out: Option<&std::path::Path>) -> Result<(), String> {
    match out {
        Some(path) => {
            let mut file = fs::File::create(path)
                .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            experiments::emit_csv(&outcome.rows, &mut file).map_err(|e| e.to_string())?;
            file.flush().map_err(|e| e.to_string())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            experiments::emit_csv(&outcome.rows, &mut lock).map_err(|e| e.to_string())
        }
    }
}
