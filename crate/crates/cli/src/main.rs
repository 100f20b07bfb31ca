use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use optomech_scatter_cli::{presets, run, threads_from_env, ConfigSources};

/// Single-photon scattering spectra of a hybrid atom-optomechanical cavity.
#[derive(Debug, Parser)]
#[command(name = "omscatter", version)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Start from a named scenario; the config file and overrides apply on top.
    #[arg(long)]
    preset: Option<String>,

    /// Output directory (defaults to `output_path` from the config, then `.`).
    #[arg(long)]
    out: Option<PathBuf>,

    /// `section.field=value`, applied after the config file. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Also write the overlap matrix used by the run.
    #[arg(long)]
    dump_overlaps: bool,

    /// Suppress the summary and warnings on stderr.
    #[arg(long)]
    quiet: bool,

    /// Print the preset names and exit.
    #[arg(long)]
    list_presets: bool,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> anyhow::Result<()> {
    let args = Args::parse();
    if args.list_presets {
        for name in presets::names() {
            println!("{name}");
        }
        return Ok(());
    }

    if let Some(n) = threads_from_env()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }

    let mut sources = ConfigSources {
        preset: args.preset.clone(),
        overrides: args.overrides.clone(),
        ..Default::default()
    };
    if let Some(path) = &args.config {
        sources = sources.with_file(path)?;
    }
    if sources.file.is_none() && sources.preset.is_none() && sources.overrides.is_empty() {
        anyhow::bail!("nothing to run: pass --config, --preset or --override");
    }
    let cfg = sources.resolve()?;
    let out = args
        .out
        .clone()
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let report = run(&cfg, &out, args.dump_overlaps)?;
    if !args.quiet {
        for d in &report.diagnostics {
            eprintln!("{d}");
        }
        for f in &report.files {
            eprintln!("wrote {}", f.display());
        }
        if let Some(n) = report.n_max_used {
            eprintln!("n_max = {n}");
        }
        if let Some(e) = report.max_flux_error {
            eprintln!("max |T + R - 1| = {e:.3e}");
        }
    }
    Ok(())
}
