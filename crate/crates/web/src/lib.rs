//! Browser bindings: transmission/reflection sweeps, occupation spectra of a
//! Gaussian photon and the dressed level ladder.

use optomech_scatter::model::{dressed_levels, Branch};
use optomech_scatter::spectra::{sweep, SweepGrid};
use optomech_scatter::wavepacket::{occupation_spectra, WavepacketSpec};
use optomech_scatter::{Geometry, SolverConfig, SystemParams};
use wasm_bindgen::prelude::*;

fn solver() -> SolverConfig {
    SolverConfig {
        convergence_tol: 1e-10,
        ..Default::default()
    }
}

fn js_err(e: optomech_scatter::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Model {
    params: SystemParams,
}

#[wasm_bindgen]
pub struct Spectrum {
    delta_c: Vec<f64>,
    t: Vec<f64>,
    r: Vec<f64>,
    n_max: usize,
    max_flux_error: f64,
}

#[wasm_bindgen]
impl Spectrum {
    pub fn delta_c(&self) -> Vec<f64> {
        self.delta_c.clone()
    }
    pub fn transmission(&self) -> Vec<f64> {
        self.t.clone()
    }
    pub fn reflection(&self) -> Vec<f64> {
        self.r.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn n_max(&self) -> usize {
        self.n_max
    }
    #[wasm_bindgen(getter)]
    pub fn max_flux_error(&self) -> f64 {
        self.max_flux_error
    }
}

#[wasm_bindgen]
pub struct Occupation {
    delta_c: Vec<f64>,
    density: Vec<f64>,
    s_t: Vec<f64>,
    s_r: Vec<f64>,
    total_t: f64,
    total_r: f64,
    n_max: usize,
}

#[wasm_bindgen]
impl Occupation {
    pub fn delta_c(&self) -> Vec<f64> {
        self.delta_c.clone()
    }
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }
    pub fn s_t(&self) -> Vec<f64> {
        self.s_t.clone()
    }
    pub fn s_r(&self) -> Vec<f64> {
        self.s_r.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn total_t(&self) -> f64 {
        self.total_t
    }
    #[wasm_bindgen(getter)]
    pub fn total_r(&self) -> f64 {
        self.total_r
    }
    #[wasm_bindgen(getter)]
    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

impl Model {
    pub fn params(&self) -> SystemParams {
        self.params
    }

    pub fn try_spectrum(
        &self,
        min: f64,
        max: f64,
        points: usize,
    ) -> optomech_scatter::Result<Spectrum> {
        let grid = SweepGrid::new(min, max, points)?;
        let s = sweep(&self.params, &grid, &solver())?;
        Ok(Spectrum {
            delta_c: grid.values(),
            t: s.transmission(),
            r: s.reflection(),
            n_max: s.n_max_used,
            max_flux_error: s.max_flux_error(),
        })
    }

    pub fn try_occupation(
        &self,
        delta_0: f64,
        d: f64,
        min: f64,
        max: f64,
        points: usize,
    ) -> optomech_scatter::Result<Occupation> {
        let wp = WavepacketSpec {
            delta_0,
            d,
            grid: SweepGrid::new(min, max, points)?,
        };
        let o = occupation_spectra(&self.params, &wp, &solver())?;
        Ok(Occupation {
            delta_c: o.grid.values(),
            density: o.density,
            s_t: o.s_t,
            s_r: o.s_r,
            total_t: o.total_t,
            total_r: o.total_r,
            n_max: o.n_max_used,
        })
    }
}

#[wasm_bindgen]
impl Model {
    /// Couplings and rates in units of the mechanical frequency.
    #[wasm_bindgen(constructor)]
    pub fn new(
        g0: f64,
        lambda: f64,
        gamma: f64,
        gamma_a: f64,
        delta_ac: f64,
        direct: bool,
    ) -> Result<Model, JsError> {
        let params = SystemParams {
            g0,
            lambda,
            big_gamma: gamma,
            gamma_a,
            delta_ac,
            n0: 0,
            geometry: if direct {
                Geometry::Direct
            } else {
                Geometry::Side
            },
        };
        params.validate().map_err(js_err)?;
        Ok(Model { params })
    }

    #[wasm_bindgen(getter)]
    pub fn polaron_shift(&self) -> f64 {
        self.params.polaron_shift().value()
    }

    pub fn spectrum(&self, min: f64, max: f64, points: usize) -> Result<Spectrum, JsError> {
        self.try_spectrum(min, max, points).map_err(js_err)
    }

    pub fn occupation(
        &self,
        delta_0: f64,
        d: f64,
        min: f64,
        max: f64,
        points: usize,
    ) -> Result<Occupation, JsError> {
        self.try_occupation(delta_0, d, min, max, points)
            .map_err(js_err)
    }

    /// `[E_0^+, E_0^-, E_1^+, E_1^-, ...]` for phonon numbers `0..count`.
    pub fn levels(&self, count: usize) -> Vec<f64> {
        let mut levels = dressed_levels(&self.params, 0..count);
        levels.sort_by_key(|l| (l.n, l.branch == Branch::Minus));
        levels.iter().map(|l| l.energy).collect()
    }
}
