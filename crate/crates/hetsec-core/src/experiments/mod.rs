//! Declarative experiment runner: sweep specifications, the figure presets,
//! deterministic execution across schemes and methods, and CSV output.

mod config;
mod csv;
mod presets;
mod sweep;

pub use config::{parse_config, ConfigError, GainSource, SweepAxis, SweepMethods, SweepSpec};
pub use csv::{emit_csv, format_significant};
pub use presets::{preset, preset_names};
pub use sweep::{run_sweep, Method, ResultRow, SweepOutcome};
