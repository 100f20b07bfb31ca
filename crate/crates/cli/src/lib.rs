//! Driver for `omscatter`: configuration files, presets and output writers.

pub mod config;
pub mod presets;
pub mod run;

pub use config::{validate, ConfigSources, Diagnostic, Mode, RunConfig, Severity};
pub use run::{run, RunReport};

/// Environment variable holding the worker thread count for sweeps.
pub const THREADS_ENV: &str = "OMSCATTER_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{origin}: {message}")]
    Config { origin: String, message: String },

    #[error("unknown preset `{0}` (try --list-presets)")]
    UnknownPreset(String),

    #[error("invalid configuration:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Solver(#[from] optomech_scatter::Error),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Thread count requested through [`THREADS_ENV`]; `None` when unset.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config {
                origin: THREADS_ENV.into(),
                message: format!("expected a positive integer, got {v:?}"),
            }),
        },
    }
}
