//! Real-space single-photon scattering amplitudes.
//!
//! With `v_g = 1` and `V = sqrt(Gamma)` the stationary amplitudes obey, for
//! every phonon channel `n`,
//!
//! ```text
//! -i (t_n - delta_{n,n0}) + V s_n = 0
//! -i r_n + V s_n = 0
//! (V/2)(delta_{n,n0} + t_n + r_n) + lambda f_n = sum_m (Dc + n0 - m + delta) U[n][m] e_m
//! lambda s_n = (Dc - Dac + n0 - n + i gamma_a) f_n
//! ```
//!
//! where `s_n = sum_m U[n][m] e_m`. Eliminating `t`, `r` and `f` leaves one
//! dense complex system for the cavity amplitudes `e`; the four-block system is
//! kept for pole handling and for residual checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::SystemParams;
use crate::overlap::{compute_overlaps, OverlapMatrix, TruncationConfig};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this `|Dtilde_a(n)|` (with `lambda > 0`) the reduced system is not
/// used and the full block system is solved instead.
pub const POLE_EPS: f64 = 1e-9;

/// Upper bound on the levels tried by [`auto_truncate`].
pub const DEFAULT_LEVEL_CEILING: usize = 512;

/// Truncation of the phonon ladder: a fixed `n_max` or `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NMax {
    Fixed(usize),
    Auto,
}

impl Serialize for NMax {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NMax::Fixed(n) => s.serialize_u64(*n as u64),
            NMax::Auto => s.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for NMax {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(NMax::Fixed(n as usize)),
            Raw::Text(t) if t == "auto" => Ok(NMax::Auto),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected \"auto\" or an integer, got {t:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub n_max: NMax,
    pub convergence_tol: f64,
    /// Highest power of `lambda^2` kept by [`solve_series`].
    pub series_order: usize,
    pub auto_nmax_step: usize,
    pub level_ceiling: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_max: NMax::Auto,
            convergence_tol: 1e-8,
            series_order: 2,
            auto_nmax_step: 8,
            level_ceiling: DEFAULT_LEVEL_CEILING,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.convergence_tol.is_finite() && self.convergence_tol > 0.0) {
            return Err(invalid("convergence_tol", "must be positive and finite"));
        }
        if self.series_order < 1 {
            return Err(invalid("series_order", "must be at least 1"));
        }
        if self.auto_nmax_step < 1 {
            return Err(invalid("auto_nmax_step", "must be at least 1"));
        }
        Ok(())
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = NMax::Fixed(n_max);
        self
    }
}

/// The complex denominators of the amplitude equations at one incident detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningShorthands {
    delta_c: f64,
    n0: usize,
    delta: f64,
    big_gamma: f64,
    delta_ac: f64,
    gamma_a: f64,
}

impl DetuningShorthands {
    pub fn new(params: &SystemParams, delta_c: f64) -> Self {
        Self {
            delta_c,
            n0: params.n0,
            delta: params.polaron_shift().value(),
            big_gamma: params.big_gamma,
            delta_ac: params.delta_ac,
            gamma_a: params.gamma_a,
        }
    }

    /// `Dc + (n0 - m) + delta + i Gamma`.
    #[inline]
    pub fn cavity(&self, m: usize) -> Complex64 {
        Complex64::new(
            self.delta_c + (self.n0 as f64 - m as f64) + self.delta,
            self.big_gamma,
        )
    }

    /// `Dc - Dac + (n0 - n) + i gamma_a`.
    #[inline]
    pub fn atom(&self, n: usize) -> Complex64 {
        Complex64::new(
            self.delta_c - self.delta_ac + (self.n0 as f64 - n as f64),
            self.gamma_a,
        )
    }
}

/// Solved amplitudes at a single incident detuning.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSet {
    pub delta_c: f64,
    pub n0: usize,
    pub t: Vec<Complex64>,
    pub r: Vec<Complex64>,
    /// Cavity amplitudes in the displaced basis.
    pub e: Vec<Complex64>,
    /// Atomic amplitudes.
    pub f: Vec<Complex64>,
}

impl AmplitudeSet {
    pub fn n_max(&self) -> usize {
        self.t.len() - 1
    }

    pub fn transmission_reflection(&self) -> (f64, f64) {
        transmission_reflection(self)
    }
}

/// `T = sum |t_n|^2`, `R = sum |r_n|^2`.
pub fn transmission_reflection(amps: &AmplitudeSet) -> (f64, f64) {
    let t = amps.t.iter().map(|z| z.norm_sqr()).sum();
    let r = amps.r.iter().map(|z| z.norm_sqr()).sum();
    (t, r)
}

/// Scattering problem with its overlap table built once for a fixed `n_max`.
///
/// Immutable after construction; share it freely between threads.
#[derive(Debug, Clone)]
pub struct Scatterer {
    params: SystemParams,
    overlaps: OverlapMatrix,
}

impl Scatterer {
    pub fn new(params: SystemParams, n_max: usize) -> Result<Self> {
        params.validate()?;
        if n_max < params.n0 {
            return Err(invalid(
                "n_max",
                format!("{n_max} is below the initial phonon number {}", params.n0),
            ));
        }
        let overlaps = compute_overlaps(params.displacement(), n_max, TruncationConfig::default())?;
        Ok(Self { params, overlaps })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn overlaps(&self) -> &OverlapMatrix {
        &self.overlaps
    }

    pub fn n_max(&self) -> usize {
        self.overlaps.dim() - 1
    }

    fn dim(&self) -> usize {
        self.overlaps.dim()
    }

    fn amplitudes_from_cavity(&self, delta_c: f64, e: Vec<Complex64>) -> AmplitudeSet {
        let p = &self.params;
        let dim = self.dim();
        let sh = DetuningShorthands::new(p, delta_c);
        let v = p.big_gamma.sqrt();
        let s = self.project(&e);
        let r: Vec<Complex64> = s.iter().map(|sn| -I * v * sn).collect();
        let t = (0..dim)
            .map(|n| r[n] + if n == p.n0 { 1.0 } else { 0.0 })
            .collect();
        let f = (0..dim)
            .map(|n| {
                if p.lambda == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    p.lambda * s[n] / sh.atom(n)
                }
            })
            .collect();
        AmplitudeSet {
            delta_c,
            n0: p.n0,
            t,
            r,
            e,
            f,
        }
    }

    /// `s_n = sum_m U[n][m] x_m`.
    fn project(&self, x: &[Complex64]) -> Vec<Complex64> {
        let dim = self.dim();
        (0..dim)
            .map(|n| (0..dim).map(|m| self.overlaps.get(n, m) * x[m]).sum())
            .collect()
    }

    /// `sum_n U[n][m] x_n`.
    fn project_transposed(&self, x: &[Complex64]) -> Vec<Complex64> {
        let dim = self.dim();
        (0..dim)
            .map(|m| (0..dim).map(|n| self.overlaps.get(n, m) * x[n]).sum())
            .collect()
    }

    fn pole_channel(&self, sh: &DetuningShorthands) -> Option<usize> {
        if self.params.lambda == 0.0 {
            return None;
        }
        (0..self.dim()).find(|&n| sh.atom(n).norm() < POLE_EPS)
    }

    /// Exact amplitudes for arbitrary `lambda`.
    pub fn solve_exact(&self, delta_c: f64) -> Result<AmplitudeSet> {
        if !delta_c.is_finite() {
            return Err(invalid("delta_c", "must be finite"));
        }
        let sh = DetuningShorthands::new(&self.params, delta_c);
        if self.pole_channel(&sh).is_some() {
            return self.solve_full(delta_c);
        }

        let p = &self.params;
        let dim = self.dim();
        let lam2 = p.lambda * p.lambda;
        let cav: Vec<Complex64> = (0..dim).map(|m| sh.cavity(m)).collect();
        let atom_term: Vec<Complex64> = (0..dim)
            .map(|n| {
                if lam2 == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    lam2 / sh.atom(n)
                }
            })
            .collect();
        let a = DMatrix::from_fn(dim, dim, |n, m| {
            self.overlaps.get(n, m) * (cav[m] - atom_term[n])
        });
        let mut b = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        b[p.n0] = Complex64::new(p.big_gamma.sqrt(), 0.0);

        match a.lu().solve(&b) {
            Some(e) if e.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
                Ok(self.amplitudes_from_cavity(delta_c, e.iter().copied().collect()))
            }
            _ => self.solve_full(delta_c),
        }
    }

    /// Assembles the `4 (n_max + 1)` system with unknowns ordered `[t, r, e, f]`.
    pub fn full_system(&self, delta_c: f64) -> (DMatrix<Complex64>, DVector<Complex64>) {
        let p = &self.params;
        let dim = self.dim();
        let sh = DetuningShorthands::new(p, delta_c);
        let v = p.big_gamma.sqrt();
        let delta = p.polaron_shift().value();
        let (ot, or, oe, of) = (0, dim, 2 * dim, 3 * dim);
        let mut a = DMatrix::from_element(4 * dim, 4 * dim, Complex64::new(0.0, 0.0));
        let mut b = DVector::from_element(4 * dim, Complex64::new(0.0, 0.0));
        for n in 0..dim {
            let (ra, rb, rc, rd) = (n, dim + n, 2 * dim + n, 3 * dim + n);
            a[(ra, ot + n)] = -I;
            a[(rb, or + n)] = -I;
            a[(rc, ot + n)] = Complex64::new(0.5 * v, 0.0);
            a[(rc, or + n)] = Complex64::new(0.5 * v, 0.0);
            a[(rc, of + n)] = Complex64::new(p.lambda, 0.0);
            a[(rd, of + n)] = -sh.atom(n);
            for m in 0..dim {
                let u = self.overlaps.get(n, m);
                a[(ra, oe + m)] = Complex64::new(v * u, 0.0);
                a[(rb, oe + m)] = Complex64::new(v * u, 0.0);
                let detuning = delta_c + (p.n0 as f64 - m as f64) + delta;
                a[(rc, oe + m)] = Complex64::new(-detuning * u, 0.0);
                a[(rd, oe + m)] = Complex64::new(p.lambda * u, 0.0);
            }
            if n == p.n0 {
                b[ra] = -I;
                b[rc] = Complex64::new(-0.5 * v, 0.0);
            }
        }
        (a, b)
    }

    /// Solves the block system directly; used on atomic poles.
    pub fn solve_full(&self, delta_c: f64) -> Result<AmplitudeSet> {
        let dim = self.dim();
        let (a, b) = self.full_system(delta_c);
        let x = a.lu().solve(&b).ok_or_else(|| {
            let sh = DetuningShorthands::new(&self.params, delta_c);
            Error::Pole {
                channel: self.pole_channel(&sh).unwrap_or(self.params.n0),
                delta_c,
            }
        })?;
        let take = |k: usize| x.rows(k * dim, dim).iter().copied().collect::<Vec<_>>();
        Ok(AmplitudeSet {
            delta_c,
            n0: self.params.n0,
            t: take(0),
            r: take(1),
            e: take(2),
            f: take(3),
        })
    }

    /// `max|A x - b| / (max|A| max|x| + max|b|)` for the block system.
    pub fn residual(&self, amps: &AmplitudeSet) -> f64 {
        let (a, b) = self.full_system(amps.delta_c);
        let x = DVector::from_iterator(
            a.ncols(),
            amps.t
                .iter()
                .chain(&amps.r)
                .chain(&amps.e)
                .chain(&amps.f)
                .copied(),
        );
        let res = &a * &x - &b;
        let inf = |it: &mut dyn Iterator<Item = &Complex64>| it.map(|z| z.norm()).fold(0.0, f64::max);
        let scale = inf(&mut a.iter()) * inf(&mut x.iter()) + inf(&mut b.iter());
        inf(&mut res.iter()) / scale
    }

    /// Series in `lambda^2` up to and including `lambda^(2 order)`.
    ///
    /// With `A = U diag(1/Dtilde_c) U^T`, the `k`-th term is
    /// `-i Gamma lambda^(2k) [A (D_a^{-1} A)^k]_{n, n0}`.
    pub fn solve_series(&self, delta_c: f64, order: usize) -> Result<AmplitudeSet> {
        let p = &self.params;
        let dim = self.dim();
        let sh = DetuningShorthands::new(p, delta_c);
        let lam2 = p.lambda * p.lambda;
        if lam2 > 0.0 && order > 0 {
            if let Some(channel) = (0..dim).find(|&n| sh.atom(n).norm() == 0.0) {
                return Err(Error::Pole { channel, delta_c });
            }
        }
        let cav_inv: Vec<Complex64> = (0..dim).map(|m| sh.cavity(m).inv()).collect();
        let apply_a = |x: &[Complex64]| {
            let mut y = self.project_transposed(x);
            y.iter_mut().zip(&cav_inv).for_each(|(y, c)| *y *= c);
            self.project(&y)
        };

        let mut unit = vec![Complex64::new(0.0, 0.0); dim];
        unit[p.n0] = Complex64::new(1.0, 0.0);
        let mut term = apply_a(&unit);
        let mut sum = term.clone();
        for _ in 0..order {
            if lam2 == 0.0 {
                break;
            }
            let scaled: Vec<Complex64> = (0..dim).map(|m| lam2 * term[m] / sh.atom(m)).collect();
            term = apply_a(&scaled);
            sum.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
        }

        let r: Vec<Complex64> = sum.iter().map(|z| -I * p.big_gamma * z).collect();
        let t = (0..dim)
            .map(|n| r[n] + if n == p.n0 { 1.0 } else { 0.0 })
            .collect();
        // cavity and atomic amplitudes consistent with the truncated r
        let v = p.big_gamma.sqrt();
        let s: Vec<Complex64> = r.iter().map(|rn| I * rn / v).collect();
        let e = self.project_transposed(&s);
        let f = (0..dim)
            .map(|n| {
                if p.lambda == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    p.lambda * s[n] / sh.atom(n)
                }
            })
            .collect();
        Ok(AmplitudeSet {
            delta_c,
            n0: p.n0,
            t,
            r,
            e,
            f,
        })
    }
}

fn resolve_scatterer(params: &SystemParams, delta_c: f64, cfg: &SolverConfig) -> Result<Scatterer> {
    cfg.validate()?;
    let n_max = match cfg.n_max {
        NMax::Fixed(n) => n,
        NMax::Auto => auto_truncate(params, delta_c, cfg)?,
    };
    Scatterer::new(*params, n_max)
}

/// Exact amplitudes at one detuning, building the overlap table on the fly.
pub fn solve_exact(params: &SystemParams, delta_c: f64, cfg: &SolverConfig) -> Result<AmplitudeSet> {
    resolve_scatterer(params, delta_c, cfg)?.solve_exact(delta_c)
}

/// Perturbative amplitudes up to `lambda^(2 cfg.series_order)`.
pub fn solve_series(params: &SystemParams, delta_c: f64, cfg: &SolverConfig) -> Result<AmplitudeSet> {
    resolve_scatterer(params, delta_c, cfg)?.solve_series(delta_c, cfg.series_order)
}

/// Closed-form reflection amplitude at `g0 = 0`:
/// `r = -i Gamma / (Dc + i Gamma - lambda^2 / (Dc - Dac + i gamma_a))`.
pub fn analytic_reference_g0_zero(params: &SystemParams, delta_c: f64) -> Result<Complex64> {
    if params.g0 != 0.0 {
        return Err(invalid("g0", "the closed form requires g0 = 0"));
    }
    let atom = Complex64::new(delta_c - params.delta_ac, params.gamma_a);
    let mut denom = Complex64::new(delta_c, params.big_gamma);
    if params.lambda != 0.0 {
        if atom.norm() == 0.0 {
            // the atomic branch blocks the cavity completely
            return Ok(Complex64::new(0.0, 0.0));
        }
        denom -= params.lambda * params.lambda / atom;
    }
    Ok(-I * params.big_gamma / denom)
}

/// Smallest `n_max` on the ladder `n0 + step, n0 + 2 step, ...` whose `T` and
/// `R` move by less than `convergence_tol` when one more rung is added.
pub fn auto_truncate(params: &SystemParams, delta_c: f64, cfg: &SolverConfig) -> Result<usize> {
    cfg.validate()?;
    params.validate()?;
    let step = cfg.auto_nmax_step;
    let eval = |n_max: usize| -> Result<(f64, f64)> {
        Ok(Scatterer::new(*params, n_max)?
            .solve_exact(delta_c)?
            .transmission_reflection())
    };
    let mut n_max = params.n0 + step;
    let mut cur = eval(n_max)?;
    loop {
        let next_n = n_max + step;
        if next_n + 1 > cfg.level_ceiling {
            return Err(Error::NotConverged {
                delta_c,
                ceiling: cfg.level_ceiling,
                t_prev: cur.0,
                t_last: cur.0,
            });
        }
        let next = eval(next_n)?;
        if (cur.0 - next.0).abs() < cfg.convergence_tol && (cur.1 - next.1).abs() < cfg.convergence_tol {
            return Ok(n_max);
        }
        if next_n + step + 1 > cfg.level_ceiling {
            return Err(Error::NotConverged {
                delta_c,
                ceiling: cfg.level_ceiling,
                t_prev: cur.0,
                t_last: next.0,
            });
        }
        n_max = next_n;
        cur = next;
    }
}
