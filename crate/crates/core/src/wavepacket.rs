//! Final reservoir occupation spectra for a Gaussian single-photon wavepacket.
//!
//! A photon leaving in phonon channel `n` has lost `(n - n0)` mechanical
//! quanta, so the outgoing density at detuning `x` collects every channel whose
//! incident detuning was `x + (n - n0)`:
//!
//! ```text
//! S_T(x) = sum_n |t_n(x + n - n0)|^2 G(x + n - n0)
//! S_R(x) = sum_n |r_n(x + n - n0)|^2 G(x + n - n0)
//! ```
//!
//! Channels add as probabilities, not amplitudes.

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::SystemParams;
use crate::scattering::{NMax, Scatterer, SolverConfig};
use crate::spectra::{choose_n_max, fmt17, map_geometry, map_indexed, SweepGrid};

/// Incident detunings whose spectral weight falls below this fraction of the
/// peak are skipped.
pub const DENSITY_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavepacketSpec {
    /// Centre detuning of the incident photon.
    pub delta_0: f64,
    /// Spectral width.
    pub d: f64,
    /// Output frequency axis.
    pub grid: SweepGrid,
}

impl WavepacketSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.delta_0.is_finite() {
            return Err(invalid("wavepacket.delta_0", "must be finite"));
        }
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(invalid("wavepacket.d", "must be positive and finite"));
        }
        self.grid.validate()
    }

    /// `G(x) = sqrt(2 / (pi d^2)) exp(-2 (x - delta_0)^2 / d^2)`.
    pub fn density(&self, x: f64) -> f64 {
        spectral_density(x, self.delta_0, self.d)
    }

    /// Incident detunings carrying non-negligible weight.
    pub fn support(&self) -> (f64, f64) {
        // G / G_max = DENSITY_CUTOFF  <=>  |x - delta_0| = d sqrt(-ln(cutoff) / 2)
        let half = self.d * (-DENSITY_CUTOFF.ln() / 2.0).sqrt();
        (self.delta_0 - half, self.delta_0 + half)
    }
}

/// Normalized Gaussian spectral density `|alpha|^2` of the incident photon.
pub fn spectral_density(x: f64, delta_0: f64, d: f64) -> f64 {
    let u = (x - delta_0) / d;
    (2.0 / (PI * d * d)).sqrt() * (-2.0 * u * u).exp()
}

/// Trapezoidal integral of samples on a uniform grid.
pub fn trapezoid(values: &[f64], spacing: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, .., last] => spacing * (values.iter().sum::<f64>() - 0.5 * (first + last)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupationSpectra {
    pub grid: SweepGrid,
    pub density: Vec<f64>,
    pub s_t: Vec<f64>,
    pub s_r: Vec<f64>,
    pub total_t: f64,
    pub total_r: f64,
    /// Scattered probability that landed outside the output grid.
    pub mass_outside_grid: f64,
    pub n_max_used: usize,
    pub warnings: Vec<String>,
}

impl OccupationSpectra {
    pub fn loss(&self) -> f64 {
        1.0 - self.total_t - self.total_r
    }

    /// `delta_c,G,S_T,S_R`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "delta_c,G,S_T,S_R")?;
        for i in 0..self.grid.points {
            writeln!(
                w,
                "{},{},{},{}",
                fmt17(self.grid.value(i)),
                fmt17(self.density[i]),
                fmt17(self.s_t[i]),
                fmt17(self.s_r[i])
            )?;
        }
        Ok(())
    }

    /// `key = value` lines with the integrated weights.
    pub fn write_summary<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "integral_S_T = {}", fmt17(self.total_t))?;
        writeln!(w, "integral_S_R = {}", fmt17(self.total_r))?;
        writeln!(w, "loss = {}", fmt17(self.loss()))?;
        writeln!(w, "mass_outside_grid = {}", fmt17(self.mass_outside_grid))?;
        writeln!(w, "n_max = {}", self.n_max_used)
    }
}

/// Number of grid steps per mechanical quantum when it is an integer.
fn aligned_stride(grid: &SweepGrid) -> Option<usize> {
    let per_quantum = 1.0 / grid.spacing();
    let k = per_quantum.round();
    (k >= 1.0 && (per_quantum - k).abs() < 1e-9 * k).then_some(k as usize)
}

/// Occupation spectra on `wp.grid` for a mirror starting in `|n0>`.
pub fn occupation_spectra(
    params: &SystemParams,
    wp: &WavepacketSpec,
    cfg: &SolverConfig,
) -> Result<OccupationSpectra> {
    params.validate()?;
    wp.validate()?;
    cfg.validate()?;

    let (lo, hi) = wp.support();
    let n_max = match cfg.n_max {
        NMax::Fixed(n) => n,
        NMax::Auto => {
            let probe_grid = SweepGrid::new(lo, hi, 129)?;
            choose_n_max(params, &probe_grid, cfg)?
        }
    };
    let scatterer = Scatterer::new(*params, n_max)?;
    occupation_spectra_with(&scatterer, wp)
}

/// [`occupation_spectra`] with a prepared [`Scatterer`].
pub fn occupation_spectra_with(scatterer: &Scatterer, wp: &WavepacketSpec) -> Result<OccupationSpectra> {
    wp.validate()?;
    let params = scatterer.params();
    let n0 = params.n0;
    let n_max = scatterer.n_max();
    let grid = wp.grid;
    let g_peak = wp.density(wp.delta_0);
    let weight = |x: f64| {
        let g = wp.density(x);
        (g >= DENSITY_CUTOFF * g_peak).then_some(g)
    };
    let probabilities = |x: f64| -> Result<(Vec<f64>, Vec<f64>)> {
        let amps = map_geometry(&scatterer.solve_exact(x)?, params.geometry);
        Ok((
            amps.t.iter().map(|z| z.norm_sqr()).collect(),
            amps.r.iter().map(|z| z.norm_sqr()).collect(),
        ))
    };

    let mut s_t = vec![0.0; grid.points];
    let mut s_r = vec![0.0; grid.points];
    let mut outside = 0.0;

    if let Some(stride) = aligned_stride(&grid) {
        // Incident detuning index j feeds output index j - (n - n0) * stride.
        let h = grid.spacing();
        let j_lo = -((n0 * stride) as isize);
        let j_hi = (grid.points - 1 + (n_max - n0) * stride) as isize;
        let incident: Vec<isize> = (j_lo..=j_hi)
            .filter(|&j| weight(grid.delta_c_min + j as f64 * h).is_some())
            .collect();
        let solved = map_indexed(incident.len(), |k| {
            let x = grid.delta_c_min + incident[k] as f64 * h;
            probabilities(x).map(|p| (p, wp.density(x)))
        });
        for (&j, res) in incident.iter().zip(solved) {
            let ((t2, r2), g) = res?;
            for n in 0..=n_max {
                let i = j - (n as isize - n0 as isize) * stride as isize;
                if i >= 0 && (i as usize) < grid.points {
                    s_t[i as usize] += t2[n] * g;
                    s_r[i as usize] += r2[n] * g;
                } else {
                    outside += (t2[n] + r2[n]) * g * h;
                }
            }
        }
    } else {
        let rows = map_indexed(grid.points, |i| -> Result<(f64, f64)> {
            let x = grid.value(i);
            let mut acc = (0.0, 0.0);
            for n in 0..=n_max {
                let xin = x + (n as f64 - n0 as f64);
                if let Some(g) = weight(xin) {
                    let (t2, r2) = probabilities(xin)?;
                    acc.0 += t2[n] * g;
                    acc.1 += r2[n] * g;
                }
            }
            Ok(acc)
        });
        for (i, row) in rows.into_iter().enumerate() {
            let (t, r) = row?;
            s_t[i] = t;
            s_r[i] = r;
        }
        outside = f64::NAN;
    }

    let h = grid.spacing();
    let density: Vec<f64> = (0..grid.points).map(|i| wp.density(grid.value(i))).collect();
    let total_t = trapezoid(&s_t, h);
    let total_r = trapezoid(&s_r, h);

    let mut warnings = Vec::new();
    let need_lo = wp.delta_0 - 3.0 * wp.d;
    let need_hi = wp.delta_0 + 3.0 * wp.d;
    if !(grid.contains(need_lo) && grid.contains(need_hi)) {
        warnings.push(format!(
            "output grid [{}, {}] does not cover delta_0 +/- 3d = [{need_lo}, {need_hi}]",
            grid.delta_c_min, grid.delta_c_max
        ));
    }
    if outside > 1e-8 {
        warnings.push(format!(
            "scattered probability {outside:.3e} falls outside the output grid; \
             extend it below delta_0 to capture the phonon sidebands"
        ));
    }

    Ok(OccupationSpectra {
        grid,
        density,
        s_t,
        s_r,
        total_t,
        total_r,
        mass_outside_grid: outside,
        n_max_used: n_max,
        warnings,
    })
}
