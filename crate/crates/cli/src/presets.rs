//! Named scenarios, one per spectrum panel.
//!
//! Panels within a figure differ by the optomechanical coupling; rows of the
//! six-panel figures use `g0 = 0, 1, sqrt(2)` and the four-panel figures use
//! `g0 = 0, 0.5, 1, sqrt(2)`.

use std::f64::consts::SQRT_2;

use optomech_scatter::spectra::SweepGrid;
use optomech_scatter::{SolverConfig, SystemParams};

use crate::config::{Mode, RunConfig, WavepacketSection};
use crate::CliError;

const FOUR_PANEL_G0: [f64; 4] = [0.0, 0.5, 1.0, SQRT_2];
const ROW_G0: [f64; 3] = [0.0, 1.0, SQRT_2];

fn solver() -> SolverConfig {
    SolverConfig {
        convergence_tol: 1e-10,
        ..Default::default()
    }
}

fn wide_grid() -> SweepGrid {
    SweepGrid {
        delta_c_min: -6.0,
        delta_c_max: 6.0,
        points: 2001,
    }
}

fn sweep(name: &str, params: SystemParams, grid: SweepGrid) -> RunConfig {
    RunConfig {
        preset: Some(name.into()),
        mode: Mode::Sweep,
        params,
        grid,
        solver: solver(),
        ..Default::default()
    }
}

fn panel(name: &str) -> Option<usize> {
    let c = name.chars().last()?;
    ('a'..='f').contains(&c).then(|| c as usize - 'a' as usize)
}

fn wavepacket(name: &str, lambda: f64) -> RunConfig {
    RunConfig {
        preset: Some(name.into()),
        mode: Mode::Wavepacket,
        params: SystemParams {
            g0: 1.0,
            lambda,
            gamma_a: 0.01,
            ..Default::default()
        },
        grid: SweepGrid {
            delta_c_min: -30.0,
            delta_c_max: 22.0,
            points: 5201,
        },
        solver: solver(),
        wavepacket: Some(WavepacketSection {
            delta_0: Some(0.0),
            d: Some(4.0),
            grid: None,
        }),
        ..Default::default()
    }
}

/// Every preset name, in a stable order.
pub fn names() -> Vec<String> {
    let mut out = Vec::new();
    for fig in ["fig2", "fig4", "fig5"] {
        out.extend(('a'..='d').map(|c| format!("{fig}{c}")));
    }
    for fig in ["fig6", "fig7"] {
        out.extend(('a'..='f').map(|c| format!("{fig}{c}")));
    }
    out.extend(["fig8", "fig8a", "fig8b"].map(String::from));
    out
}

pub fn lookup(name: &str) -> Result<RunConfig, CliError> {
    let unknown = || CliError::UnknownPreset(name.to_owned());
    let fig = name.get(..4).ok_or_else(unknown)?;
    let p = SystemParams::default();
    let cfg = match (fig, name.len()) {
        ("fig8", 4) => wavepacket(name, 0.1),
        ("fig8", 5) if name == "fig8a" => wavepacket(name, 0.1),
        ("fig8", 5) if name == "fig8b" => wavepacket(name, 4.0),
        (_, 5) => {
            let i = panel(name).ok_or_else(unknown)?;
            match fig {
                "fig2" if i < 4 => sweep(
                    name,
                    SystemParams {
                        g0: FOUR_PANEL_G0[i],
                        ..p
                    },
                    SweepGrid::default(),
                ),
                "fig4" if i < 4 => sweep(
                    name,
                    SystemParams {
                        g0: FOUR_PANEL_G0[i],
                        lambda: 4.0,
                        ..p
                    },
                    wide_grid(),
                ),
                "fig5" if i < 4 => sweep(
                    name,
                    SystemParams {
                        g0: FOUR_PANEL_G0[i],
                        lambda: 0.05,
                        ..p
                    },
                    SweepGrid::default(),
                ),
                "fig6" => sweep(
                    name,
                    SystemParams {
                        g0: ROW_G0[i / 2],
                        lambda: 0.05,
                        delta_ac: if i % 2 == 0 { -0.1 } else { 0.1 },
                        ..p
                    },
                    SweepGrid::default(),
                ),
                "fig7" => {
                    let strong = i % 2 == 1;
                    sweep(
                        name,
                        SystemParams {
                            g0: ROW_G0[i / 2],
                            lambda: if strong { 4.0 } else { 0.1 },
                            gamma_a: 0.01,
                            ..p
                        },
                        if strong { wide_grid() } else { SweepGrid::default() },
                    )
                }
                _ => return Err(unknown()),
            }
        }
        _ => return Err(unknown()),
    };
    Ok(cfg)
}
