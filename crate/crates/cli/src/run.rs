use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use optomech_scatter::model::{
    degenerate_limit_levels, dressed_levels, rabi_limit_levels, Branch, DressedLevel,
    DEGENERACY_TOL,
};
use optomech_scatter::overlap::{compute_overlaps, OverlapMatrix, TruncationConfig};
use optomech_scatter::spectra::{choose_n_max, fmt17, sweep, SpectrumSweep};
use optomech_scatter::wavepacket::{occupation_spectra, OccupationSpectra};
use optomech_scatter::{Geometry, NMax};

use crate::config::{validate, Diagnostic, Mode, RunConfig};
use crate::CliError;

/// What a run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub diagnostics: Vec<Diagnostic>,
    pub n_max_used: Option<usize>,
    /// `max |T + R - 1|` over the run (sweep mode).
    pub max_flux_error: Option<f64>,
}

enum Outcome {
    Sweep(SpectrumSweep),
    Wavepacket(OccupationSpectra),
    Levels(Vec<(&'static str, DressedLevel)>),
    Overlaps(OverlapMatrix),
}

/// Validates `cfg` and writes every output file into `out_dir`.
pub fn run(cfg: &RunConfig, out_dir: &Path, dump_overlaps: bool) -> Result<RunReport, CliError> {
    let diagnostics = validate(cfg);
    let errors: Vec<Diagnostic> = diagnostics.iter().filter(|d| d.is_error()).cloned().collect();
    if !errors.is_empty() {
        return Err(CliError::Invalid(errors));
    }
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;

    let outcome = match cfg.mode {
        Mode::Sweep => Outcome::Sweep(sweep(&cfg.params, &cfg.grid, &cfg.solver)?),
        Mode::Wavepacket => {
            let spec = cfg.wavepacket_spec().expect("validated");
            Outcome::Wavepacket(occupation_spectra(&cfg.params, &spec, &cfg.solver)?)
        }
        Mode::Levels => Outcome::Levels(levels(cfg)),
        Mode::OverlapsDump => {
            let n_max = choose_n_max(&cfg.params, &cfg.grid, &cfg.solver)?;
            Outcome::Overlaps(compute_overlaps(
                cfg.params.displacement(),
                n_max,
                TruncationConfig::default(),
            )?)
        }
    };

    let mut files = Vec::new();
    let mut emit = |name: &str, f: &dyn Fn(&mut dyn Write) -> std::io::Result<()>| {
        let path = out_dir.join(name);
        write_file(&path, f)?;
        files.push(path);
        Ok::<(), CliError>(())
    };

    let mut n_max_used = None;
    let mut max_flux_error = None;
    let mut audit: Vec<(&str, String)> = Vec::new();
    let mut warnings: Vec<String> = diagnostics.iter().map(|d| d.to_string()).collect();

    match &outcome {
        Outcome::Sweep(s) => {
            emit("spectrum.csv", &|w| s.write_csv(w))?;
            let (lo, hi) = s.flux_range();
            n_max_used = Some(s.n_max_used);
            max_flux_error = Some(s.max_flux_error());
            audit.push(("max_residual", fmt17(s.max_residual())));
            audit.push(("flux_min", fmt17(lo)));
            audit.push(("flux_max", fmt17(hi)));
            audit.push(("max_flux_error", fmt17(s.max_flux_error())));
        }
        Outcome::Wavepacket(o) => {
            emit("occupation.csv", &|w| o.write_csv(w))?;
            emit("occupation_summary.txt", &|w| o.write_summary(w))?;
            n_max_used = Some(o.n_max_used);
            audit.push(("integral_S_T", fmt17(o.total_t)));
            audit.push(("integral_S_R", fmt17(o.total_r)));
            audit.push(("loss", fmt17(o.loss())));
            audit.push(("mass_outside_grid", fmt17(o.mass_outside_grid)));
            warnings.extend(o.warnings.iter().map(|w| format!("warning: {w}")));
        }
        Outcome::Levels(levels) => {
            emit("levels.csv", &|w| write_levels(w, levels))?;
        }
        Outcome::Overlaps(u) => {
            emit("overlaps.csv", &|w| write_overlaps(w, u))?;
            n_max_used = Some(u.dim() - 1);
        }
    }

    if dump_overlaps && !matches!(outcome, Outcome::Overlaps(_)) {
        let n_max = match n_max_used {
            Some(n) => n,
            None => choose_n_max(&cfg.params, &cfg.grid, &cfg.solver)?,
        };
        let u = compute_overlaps(cfg.params.displacement(), n_max, TruncationConfig::default())?;
        emit("overlaps.csv", &|w| write_overlaps(w, &u))?;
    }

    emit("manifest", &|w| {
        write_manifest(w, cfg, n_max_used, &audit, &warnings)
    })?;

    Ok(RunReport {
        files,
        diagnostics,
        n_max_used,
        max_flux_error,
    })
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_file(path: &Path, f: &dyn Fn(&mut dyn Write) -> std::io::Result<()>) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(path, e))
}

fn levels(cfg: &RunConfig) -> Vec<(&'static str, DressedLevel)> {
    let range = 0..cfg.levels.count;
    let mut out: Vec<(&'static str, DressedLevel)> = Vec::new();
    out.extend(dressed_levels(&cfg.params, range.clone()).into_iter().map(|l| ("exact", l)));
    out.extend(
        rabi_limit_levels(&cfg.params, range.clone())
            .into_iter()
            .map(|l| ("rabi_limit", l)),
    );
    let delta = cfg.params.polaron_shift().value();
    let m = delta.round();
    if m >= 1.0 && (delta - m).abs() <= DEGENERACY_TOL {
        if let Ok(levels) = degenerate_limit_levels(&cfg.params, range, m as usize) {
            out.extend(levels.into_iter().map(|l| ("degenerate_limit", l)));
        }
    }
    out
}

fn write_levels(w: &mut dyn Write, levels: &[(&str, DressedLevel)]) -> std::io::Result<()> {
    writeln!(w, "model,n,branch,energy,mixing_angle")?;
    for (model, l) in levels {
        let branch = match l.branch {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        };
        writeln!(
            w,
            "{model},{},{branch},{},{}",
            l.n,
            fmt17(l.energy),
            fmt17(l.mixing_angle)
        )?;
    }
    Ok(())
}

fn write_overlaps(w: &mut dyn Write, u: &OverlapMatrix) -> std::io::Result<()> {
    writeln!(w, "n,m,U")?;
    for n in 0..u.dim() {
        for m in 0..u.dim() {
            writeln!(w, "{n},{m},{}", fmt17(u.get(n, m)))?;
        }
    }
    Ok(())
}

fn write_manifest(
    w: &mut dyn Write,
    cfg: &RunConfig,
    n_max_used: Option<usize>,
    audit: &[(&str, String)],
    warnings: &[String],
) -> std::io::Result<()> {
    let p = &cfg.params;
    writeln!(w, "mode = {}", cfg.mode)?;
    writeln!(w, "preset = {}", cfg.preset.as_deref().unwrap_or("none"))?;
    writeln!(w, "params.g0 = {}", fmt17(p.g0))?;
    writeln!(w, "params.lambda = {}", fmt17(p.lambda))?;
    writeln!(w, "params.gamma = {}", fmt17(p.big_gamma))?;
    writeln!(w, "params.gamma_a = {}", fmt17(p.gamma_a))?;
    writeln!(w, "params.delta_ac = {}", fmt17(p.delta_ac))?;
    writeln!(w, "params.n0 = {}", p.n0)?;
    let geometry = match p.geometry {
        Geometry::Side => "side",
        Geometry::Direct => "direct",
    };
    writeln!(w, "params.geometry = {geometry}")?;
    writeln!(w, "polaron_shift = {}", fmt17(p.polaron_shift().value()))?;
    let grid = match cfg.mode {
        Mode::Wavepacket => cfg.wavepacket_spec().map(|s| s.grid).unwrap_or(cfg.grid),
        _ => cfg.grid,
    };
    writeln!(w, "grid.delta_c_min = {}", fmt17(grid.delta_c_min))?;
    writeln!(w, "grid.delta_c_max = {}", fmt17(grid.delta_c_max))?;
    writeln!(w, "grid.points = {}", grid.points)?;
    if let Some(spec) = cfg.wavepacket_spec().filter(|_| cfg.mode == Mode::Wavepacket) {
        writeln!(w, "wavepacket.delta_0 = {}", fmt17(spec.delta_0))?;
        writeln!(w, "wavepacket.d = {}", fmt17(spec.d))?;
    }
    let s = &cfg.solver;
    match s.n_max {
        NMax::Fixed(n) => writeln!(w, "solver.n_max = {n}")?,
        NMax::Auto => writeln!(w, "solver.n_max = auto")?,
    }
    writeln!(w, "solver.convergence_tol = {}", fmt17(s.convergence_tol))?;
    writeln!(w, "solver.series_order = {}", s.series_order)?;
    writeln!(w, "solver.auto_nmax_step = {}", s.auto_nmax_step)?;
    writeln!(w, "solver.level_ceiling = {}", s.level_ceiling)?;
    if let Some(n) = n_max_used {
        writeln!(w, "n_max_used = {n}")?;
    }
    for (k, v) in audit {
        writeln!(w, "{k} = {v}")?;
    }
    for msg in warnings {
        writeln!(w, "# {msg}")?;
    }
    Ok(())
}
