//! Detuning sweeps, spectral feature extraction and the side/direct geometry map.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{Geometry, SystemParams};
use crate::scattering::{auto_truncate, AmplitudeSet, NMax, Scatterer, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub delta_c_min: f64,
    pub delta_c_max: f64,
    pub points: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            delta_c_min: -2.5,
            delta_c_max: 3.5,
            points: 2001,
        }
    }
}

impl SweepGrid {
    pub fn new(delta_c_min: f64, delta_c_max: f64, points: usize) -> Result<Self> {
        let g = Self {
            delta_c_min,
            delta_c_max,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta_c_min.is_finite() || !self.delta_c_max.is_finite() {
            return Err(invalid("grid", "bounds must be finite"));
        }
        if self.points < 2 {
            return Err(invalid("grid.points", "need at least 2 points"));
        }
        if self.delta_c_min >= self.delta_c_max {
            return Err(invalid("grid", "delta_c_min must be below delta_c_max"));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.delta_c_max - self.delta_c_min) / (self.points - 1) as f64
    }

    #[inline]
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.delta_c_max
        } else {
            self.delta_c_min + i as f64 * self.spacing()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.delta_c_min && x <= self.delta_c_max
    }
}

/// Evaluates `f(i)` for `i in 0..n`, in parallel when the `parallel` feature
/// is on. Output order always follows the index.
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint {
    pub delta_c: f64,
    pub t: f64,
    pub r: f64,
    pub flux: f64,
    /// `|t_n|^2` per phonon channel.
    pub t2: Vec<f64>,
    /// `|r_n|^2` per phonon channel.
    pub r2: Vec<f64>,
    /// Relative residual of the block equations.
    pub residual: f64,
}

impl SpectrumPoint {
    fn from_amplitudes(amps: &AmplitudeSet, residual: f64) -> Self {
        let t2: Vec<f64> = amps.t.iter().map(|z| z.norm_sqr()).collect();
        let r2: Vec<f64> = amps.r.iter().map(|z| z.norm_sqr()).collect();
        let t: f64 = t2.iter().sum();
        let r: f64 = r2.iter().sum();
        Self {
            delta_c: amps.delta_c,
            t,
            r,
            flux: t + r,
            t2,
            r2,
            residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSweep {
    pub grid: SweepGrid,
    pub params: SystemParams,
    pub n_max_used: usize,
    pub points: Vec<SpectrumPoint>,
}

impl SpectrumSweep {
    pub fn transmission(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn reflection(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.r).collect()
    }

    pub fn max_flux_error(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p.flux - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn flux_range(&self) -> (f64, f64) {
        self.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.flux), hi.max(p.flux))
        })
    }

    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    /// `delta_c,T,R,flux,t2_0..t2_N,r2_0..r2_N`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let channels = self.n_max_used + 1;
        write!(w, "delta_c,T,R,flux")?;
        for n in 0..channels {
            write!(w, ",t2_{n}")?;
        }
        for n in 0..channels {
            write!(w, ",r2_{n}")?;
        }
        writeln!(w)?;
        for p in &self.points {
            write!(w, "{},{},{},{}", fmt17(p.delta_c), fmt17(p.t), fmt17(p.r), fmt17(p.flux))?;
            for v in p.t2.iter().chain(&p.r2) {
                write!(w, ",{}", fmt17(*v))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Most probes [`choose_n_max`] spends on one grid.
pub const MAX_TRUNCATION_PROBES: usize = 64;

/// Picks one `n_max` for a whole grid: the largest auto-truncation over the
/// endpoints, the point nearest zero detuning and an evenly strided subset of
/// at most [`MAX_TRUNCATION_PROBES`] points.
pub fn choose_n_max(params: &SystemParams, grid: &SweepGrid, cfg: &SolverConfig) -> Result<usize> {
    if let NMax::Fixed(n) = cfg.n_max {
        return Ok(n);
    }
    let stride = grid.points.div_ceil(MAX_TRUNCATION_PROBES).max(1);
    let mut probes: Vec<usize> = (0..grid.points).step_by(stride).collect();
    probes.push(grid.points - 1);
    let nearest_zero = (0..grid.points)
        .min_by(|&a, &b| grid.value(a).abs().total_cmp(&grid.value(b).abs()))
        .unwrap_or(0);
    probes.push(nearest_zero);
    probes.sort_unstable();
    probes.dedup();
    let found = map_indexed(probes.len(), |k| {
        let i = probes[k];
        auto_truncate(params, grid.value(i), cfg).map_err(|e| at_point(i, grid.value(i), e))
    });
    found
        .into_iter()
        .try_fold(0, |best, n| Ok(best.max(n?)))
}

fn at_point(index: usize, delta_c: f64, source: Error) -> Error {
    Error::AtGridPoint {
        index,
        delta_c,
        source: Box::new(source),
    }
}

/// Exact spectrum on every grid point, sharing a single overlap table.
pub fn sweep(params: &SystemParams, grid: &SweepGrid, cfg: &SolverConfig) -> Result<SpectrumSweep> {
    grid.validate()?;
    cfg.validate()?;
    params.validate()?;
    let n_max = choose_n_max(params, grid, cfg)?;
    let scatterer = Scatterer::new(*params, n_max)?;
    sweep_with(&scatterer, grid)
}

/// Sweep with a prepared [`Scatterer`].
pub fn sweep_with(scatterer: &Scatterer, grid: &SweepGrid) -> Result<SpectrumSweep> {
    grid.validate()?;
    let geometry = scatterer.params().geometry;
    let points = map_indexed(grid.points, |i| {
        let dc = grid.value(i);
        let amps = scatterer.solve_exact(dc).map_err(|e| at_point(i, dc, e))?;
        let residual = scatterer.residual(&amps);
        Ok(SpectrumPoint::from_amplitudes(&map_geometry(&amps, geometry), residual))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumSweep {
        grid: *grid,
        params: *scatterer.params(),
        n_max_used: scatterer.n_max(),
        points,
    })
}

/// Converts side-coupled amplitudes to the requested geometry.
///
/// The direct-coupled transmission in channel `n` is the side-coupled
/// reflection in that channel and vice versa, so the map swaps `t` and `r`
/// channel-wise. It is its own inverse and leaves `T + R` unchanged.
pub fn map_geometry(amps: &AmplitudeSet, geometry: Geometry) -> AmplitudeSet {
    match geometry {
        Geometry::Side => amps.clone(),
        Geometry::Direct => AmplitudeSet {
            t: amps.r.clone(),
            r: amps.t.clone(),
            ..amps.clone()
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Dip,
    Peak,
    EitWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralFeature {
    pub kind: FeatureKind,
    pub location: f64,
    pub value: f64,
    /// Half width at half depth (dips) or half height (peaks), when both
    /// crossings lie inside the grid.
    pub width: Option<f64>,
}

/// Vertex of the parabola through three equally spaced samples, as an offset
/// in units of the spacing together with the interpolated value.
fn parabolic_vertex(ym: f64, y0: f64, yp: f64) -> (f64, f64) {
    let denom = ym - 2.0 * y0 + yp;
    if denom == 0.0 {
        return (0.0, y0);
    }
    let off = (0.5 * (ym - yp) / denom).clamp(-0.5, 0.5);
    let val = y0 - 0.25 * (ym - yp) * off;
    (off, val)
}

fn crossing(xs: &[f64], ys: &[f64], from: usize, level: f64, step: isize) -> Option<f64> {
    let mut i = from as isize;
    let below = ys[from] < level;
    loop {
        let j = i + step;
        if j < 0 || j as usize >= ys.len() {
            return None;
        }
        let (a, b) = (i as usize, j as usize);
        if (ys[b] < level) != below {
            let frac = (level - ys[a]) / (ys[b] - ys[a]);
            return Some(xs[a] + frac * (xs[b] - xs[a]));
        }
        i = j;
    }
}

/// Local extrema of `T`: minima below `threshold` are dips, maxima above
/// `1 - threshold` are peaks, and a peak with a dip on each side within
/// `3 Gamma` is an EIT window.
pub fn find_features(sweep: &SpectrumSweep, threshold: f64) -> Vec<SpectralFeature> {
    let xs = sweep.grid.values();
    let ys = sweep.transmission();
    find_features_in(&xs, &ys, threshold, 3.0 * sweep.params.big_gamma)
}

/// [`find_features`] on raw samples of a spectrum taking values in `[0, 1]`.
pub fn find_features_in(xs: &[f64], ys: &[f64], threshold: f64, eit_reach: f64) -> Vec<SpectralFeature> {
    let n = ys.len();
    if n < 3 {
        return Vec::new();
    }
    let h = xs[1] - xs[0];
    let mut out = Vec::new();
    for i in 1..n - 1 {
        let (ym, y0, yp) = (ys[i - 1], ys[i], ys[i + 1]);
        let is_min = y0 < ym && y0 <= yp;
        let is_max = y0 > ym && y0 >= yp;
        if !(is_min || is_max) {
            continue;
        }
        let (off, val) = parabolic_vertex(ym, y0, yp);
        let location = xs[i] + off * h;
        if is_min && y0 < threshold {
            let value = val.clamp(0.0, 1.0);
            let level = value + 0.5 * (1.0 - value);
            let width = crossing(xs, ys, i, level, -1)
                .zip(crossing(xs, ys, i, level, 1))
                .map(|(l, r)| 0.5 * (r - l));
            out.push(SpectralFeature {
                kind: FeatureKind::Dip,
                location,
                value,
                width,
            });
        } else if is_max && y0 > 1.0 - threshold {
            let value = val.clamp(0.0, 1.0);
            let width = crossing(xs, ys, i, 0.5 * value, -1)
                .zip(crossing(xs, ys, i, 0.5 * value, 1))
                .map(|(l, r)| 0.5 * (r - l));
            out.push(SpectralFeature {
                kind: FeatureKind::Peak,
                location,
                value,
                width,
            });
        }
    }

    let dips: Vec<f64> = out
        .iter()
        .filter(|f| f.kind == FeatureKind::Dip)
        .map(|f| f.location)
        .collect();
    for f in out.iter_mut().filter(|f| f.kind == FeatureKind::Peak) {
        let left = dips.iter().any(|&d| d < f.location && f.location - d <= eit_reach);
        let right = dips.iter().any(|&d| d > f.location && d - f.location <= eit_reach);
        if left && right {
            f.kind = FeatureKind::EitWindow;
        }
    }
    out
}

/// Golden-section search for an extremum of `T` on `[lo, hi]` using the exact
/// solver. Returns `(location, T)`.
pub fn refine_extremum(
    scatterer: &Scatterer,
    lo: f64,
    hi: f64,
    minimize: bool,
    tol: f64,
) -> Result<(f64, f64)> {
    let geometry = scatterer.params().geometry;
    let eval = |x: f64| -> Result<f64> {
        let amps = map_geometry(&scatterer.solve_exact(x)?, geometry);
        let t = amps.transmission_reflection().0;
        Ok(if minimize { t } else { -t })
    };
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d)?;
        }
    }
    let x = 0.5 * (a + b);
    let v = eval(x)?;
    Ok((x, if minimize { v } else { -v }))
}
