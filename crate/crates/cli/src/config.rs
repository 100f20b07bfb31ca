//! Run configuration: TOML documents, preset expansion, `--override` patches
//! and validation diagnostics.

use std::fmt;
use std::path::Path;

use optomech_scatter::spectra::SweepGrid;
use optomech_scatter::wavepacket::WavepacketSpec;
use optomech_scatter::{SolverConfig, SystemParams};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::presets;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Sweep,
    Wavepacket,
    Levels,
    OverlapsDump,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sweep => "sweep",
            Mode::Wavepacket => "wavepacket",
            Mode::Levels => "levels",
            Mode::OverlapsDump => "overlaps_dump",
        })
    }
}

/// `[wavepacket]` section. Fields are optional here so that a missing width
/// is reported by [`validate`] rather than as a parse error.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WavepacketSection {
    pub delta_0: Option<f64>,
    pub d: Option<f64>,
    /// Output frequency axis; the top-level `[grid]` is used when absent.
    pub grid: Option<SweepGrid>,
}

/// `[levels]` section for `mode = "levels"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevelsSection {
    /// Phonon indices `0..count` are listed.
    pub count: usize,
}

impl Default for LevelsSection {
    fn default() -> Self {
        Self { count: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub mode: Mode,
    pub output_path: Option<String>,
    pub params: SystemParams,
    pub grid: SweepGrid,
    pub solver: SolverConfig,
    pub wavepacket: Option<WavepacketSection>,
    pub levels: LevelsSection,
}

impl RunConfig {
    /// The wavepacket description, once [`validate`] reports no errors.
    pub fn wavepacket_spec(&self) -> Option<WavepacketSpec> {
        let w = self.wavepacket?;
        Some(WavepacketSpec {
            delta_0: w.delta_0.unwrap_or(0.0),
            d: w.d?,
            grid: w.grid.unwrap_or(self.grid),
        })
    }

    pub fn to_table(&self) -> Table {
        Table::try_from(self).expect("RunConfig serializes to a table")
    }
}

/// Where the pieces of a configuration come from, in increasing precedence.
#[derive(Debug, Clone, Default)]
pub struct ConfigSources {
    pub file: Option<(String, String)>,
    pub preset: Option<String>,
    pub overrides: Vec<String>,
}

impl ConfigSources {
    pub fn with_file(mut self, path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.file = Some((path.display().to_string(), text));
        Ok(self)
    }

    /// Preset first, then the file on top of it, then every override in order.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut file_table = Table::new();
        if let Some((name, text)) = &self.file {
            // parse on its own first so errors point at lines in the file
            toml::from_str::<RunConfig>(text).map_err(|e| CliError::Config {
                origin: name.clone(),
                message: e.to_string(),
            })?;
            file_table = text.parse::<Table>().map_err(|e| CliError::Config {
                origin: name.clone(),
                message: e.to_string(),
            })?;
        }

        let preset_name = self.preset.clone().or_else(|| {
            file_table
                .get("preset")
                .and_then(Value::as_str)
                .map(str::to_owned)
        });
        let mut merged = match &preset_name {
            Some(name) => presets::lookup(name)?.to_table(),
            None => Table::new(),
        };
        merge(&mut merged, file_table);
        if let Some(name) = preset_name {
            merged.insert("preset".into(), Value::String(name));
        }
        for ov in &self.overrides {
            apply_override(&mut merged, ov)?;
        }

        Value::Table(merged)
            .try_into::<RunConfig>()
            .map_err(|e| CliError::Config {
                origin: "merged configuration".into(),
                message: e.to_string(),
            })
    }
}

fn merge(base: &mut Table, patch: Table) {
    for (key, value) in patch {
        match (base.get_mut(&key), value) {
            (Some(Value::Table(b)), Value::Table(p)) => merge(b, p),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

/// Applies `section.field=value`. The value is read as a TOML literal and
/// falls back to a plain string.
pub fn apply_override(table: &mut Table, spec: &str) -> Result<(), CliError> {
    let bad = |message: String| CliError::Config {
        origin: format!("--override {spec}"),
        message,
    };
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| bad("expected key=value".into()))?;
    let keys: Vec<&str> = path.trim().split('.').map(str::trim).collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(bad(format!("malformed key `{path}`")));
    }
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_owned()));

    let (last, parents) = keys.split_last().expect("at least one key");
    let mut node = table;
    for key in parents {
        let entry = node
            .entry(key.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| bad(format!("`{key}` is not a section")))?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn warning(field: &str, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            field: field.into(),
            message: message.into(),
        }
    }

    fn error(field: &str, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}: {}", self.field, self.message)
    }
}

/// Warnings and hard errors for a resolved configuration.
pub fn validate(cfg: &RunConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if let Err(e) = cfg.params.validate() {
        out.push(Diagnostic::error("params", e.to_string()));
    }
    if cfg.params.sideband_unresolved() {
        out.push(Diagnostic::warning(
            "params.gamma",
            format!(
                "gamma = {} is not below the mechanical frequency; the model assumes \
                 the sideband-resolved regime (gamma << 1)",
                cfg.params.big_gamma
            ),
        ));
    }
    if let Err(e) = cfg.solver.validate() {
        out.push(Diagnostic::error("solver", e.to_string()));
    }

    match cfg.mode {
        Mode::Sweep => {
            if let Err(e) = cfg.grid.validate() {
                out.push(Diagnostic::error("grid", e.to_string()));
            }
        }
        Mode::Wavepacket => validate_wavepacket(cfg, &mut out),
        Mode::Levels => {
            if cfg.levels.count == 0 {
                out.push(Diagnostic::error("levels.count", "must be at least 1"));
            }
        }
        Mode::OverlapsDump => {}
    }
    out
}

fn validate_wavepacket(cfg: &RunConfig, out: &mut Vec<Diagnostic>) {
    let Some(section) = cfg.wavepacket else {
        out.push(Diagnostic::error(
            "wavepacket",
            "section is required in wavepacket mode",
        ));
        return;
    };
    let Some(d) = section.d else {
        out.push(Diagnostic::error("wavepacket.d", "spectral width is required"));
        return;
    };
    if !(d.is_finite() && d > 0.0) {
        out.push(Diagnostic::error("wavepacket.d", "must be positive and finite"));
        return;
    }
    let spec = cfg.wavepacket_spec().expect("d present");
    if let Err(e) = spec.validate() {
        out.push(Diagnostic::error("wavepacket", e.to_string()));
        return;
    }
    let (lo, hi) = (spec.delta_0 - 3.0 * d, spec.delta_0 + 3.0 * d);
    if !(spec.grid.contains(lo) && spec.grid.contains(hi)) {
        out.push(Diagnostic::warning(
            "wavepacket.grid",
            format!(
                "[{}, {}] does not cover delta_0 +/- 3d = [{lo}, {hi}]",
                spec.grid.delta_c_min, spec.grid.delta_c_max
            ),
        ));
    }
}
