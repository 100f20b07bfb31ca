//! System parameters and the dressed eigenstructure of the isolated
//! atom–optomechanical cavity.
//!
//! Every frequency is a detuning from the cavity resonance measured in units
//! of the mechanical frequency, so `Omega == 1` throughout.

use std::f64::consts::FRAC_PI_4;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::overlap::DisplacementParameter;

/// Tolerance on `delta == m` accepted by [`degenerate_limit_levels`].
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    /// Cavity beside the waveguide.
    #[default]
    Side,
    /// Cavity in line with the waveguide.
    Direct,
}

/// Omitted fields take their [`Default`] values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    /// Single-photon optomechanical coupling.
    pub g0: f64,
    /// Atom–cavity coupling.
    pub lambda: f64,
    /// Cavity–waveguide decay rate `V^2 / v_g`.
    #[serde(rename = "gamma")]
    pub big_gamma: f64,
    /// Atomic dissipation rate.
    pub gamma_a: f64,
    /// Atom–cavity detuning `omega_a - omega_c`.
    pub delta_ac: f64,
    /// Initial mirror Fock state.
    pub n0: usize,
    pub geometry: Geometry,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            g0: 0.0,
            lambda: 0.0,
            big_gamma: 0.1,
            gamma_a: 0.0,
            delta_ac: 0.0,
            n0: 0,
            geometry: Geometry::Side,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("g0", self.g0),
            ("lambda", self.lambda),
            ("gamma", self.big_gamma),
            ("gamma_a", self.gamma_a),
            ("delta_ac", self.delta_ac),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        if self.g0 < 0.0 {
            return Err(invalid("g0", "must be non-negative"));
        }
        if self.lambda < 0.0 {
            return Err(invalid("lambda", "must be non-negative"));
        }
        if self.big_gamma <= 0.0 {
            return Err(invalid("gamma", "must be positive"));
        }
        if self.gamma_a < 0.0 {
            return Err(invalid("gamma_a", "must be non-negative"));
        }
        Ok(())
    }

    /// Outside the sideband-resolved regime (`Gamma >= Omega`). Not an error.
    pub fn sideband_unresolved(&self) -> bool {
        self.big_gamma >= 1.0
    }

    pub fn displacement(&self) -> DisplacementParameter {
        DisplacementParameter::new(self.g0).expect("g0 validated finite")
    }

    pub fn polaron_shift(&self) -> PolaronShift {
        polaron_shift(self)
    }
}

/// Red shift `delta = g0^2 / Omega` of the one-photon cavity resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolaronShift(pub f64);

impl PolaronShift {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn polaron_shift(params: &SystemParams) -> PolaronShift {
    PolaronShift(params.g0 * params.g0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// One eigenlevel of the single-excitation atom–optomechanical Hamiltonian.
///
/// `energy` is measured from `omega_c / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedLevel {
    pub n: usize,
    pub branch: Branch,
    pub energy: f64,
    pub mixing_angle: f64,
}

/// `theta = atan(2 lambda / (delta_ac + delta)) / 2`, with the arctangent taken
/// on `(0, pi/2)` for non-negative `lambda`.
pub fn mixing_angle(params: &SystemParams) -> f64 {
    let denom = params.delta_ac + polaron_shift(params).value();
    let num = 2.0 * params.lambda;
    if denom == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            FRAC_PI_4
        }
    } else {
        // atan2 keeps the branch continuous through denom -> 0 from either side
        0.5 * num.atan2(denom)
    }
}

fn emit(n_range: Range<usize>, mut energy: impl FnMut(usize, Branch) -> f64, theta: f64) -> Vec<DressedLevel> {
    n_range
        .flat_map(|n| [Branch::Plus, Branch::Minus].map(|b| (n, b)))
        .map(|(n, branch)| DressedLevel {
            n,
            branch,
            energy: energy(n, branch),
            mixing_angle: theta,
        })
        .collect()
}

/// Exact `E_n^(+/-) = n - delta/2 +/- sqrt((delta_ac + delta)^2 + 4 lambda^2) / 2`.
pub fn dressed_levels(params: &SystemParams, n_range: Range<usize>) -> Vec<DressedLevel> {
    let delta = polaron_shift(params).value();
    let half_split = 0.5 * (params.delta_ac + delta).hypot(2.0 * params.lambda);
    emit(
        n_range,
        |n, b| {
            let base = n as f64 - 0.5 * delta;
            match b {
                Branch::Plus => base + half_split,
                Branch::Minus => base - half_split,
            }
        },
        mixing_angle(params),
    )
}

/// Strong atom coupling asymptote `E_n^(+/-) ~ n - delta/2 +/- lambda`.
pub fn rabi_limit_levels(params: &SystemParams, n_range: Range<usize>) -> Vec<DressedLevel> {
    let delta = polaron_shift(params).value();
    emit(
        n_range,
        |n, b| {
            let base = n as f64 - 0.5 * delta;
            match b {
                Branch::Plus => base + params.lambda,
                Branch::Minus => base - params.lambda,
            }
        },
        FRAC_PI_4,
    )
}

/// Perturbative pair at `delta = m`: `E_n^(+) ~ n + lambda^2/delta` and
/// `E_{n+m}^(-) ~ n - lambda^2/delta`.
///
/// Levels are labelled by their own phonon index, so the minus entry paired
/// with `n` carries `n + m`.
pub fn degenerate_limit_levels(
    params: &SystemParams,
    n_range: Range<usize>,
    m: usize,
) -> Result<Vec<DressedLevel>> {
    let delta = polaron_shift(params).value();
    if m == 0 || (delta - m as f64).abs() > DEGENERACY_TOL {
        return Err(Error::NotDegenerate { delta, m });
    }
    let shift = params.lambda * params.lambda / delta;
    let theta = mixing_angle(params);
    Ok(n_range
        .flat_map(|n| {
            [
                DressedLevel {
                    n,
                    branch: Branch::Plus,
                    energy: n as f64 + shift,
                    mixing_angle: theta,
                },
                DressedLevel {
                    n: n + m,
                    branch: Branch::Minus,
                    energy: n as f64 - shift,
                    mixing_angle: theta,
                },
            ]
        })
        .collect())
}
