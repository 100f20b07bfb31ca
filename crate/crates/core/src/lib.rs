//! Single-photon transport through a waveguide side-coupled to an
//! optomechanical cavity that also holds a two-level atom.
//!
//! Frequencies are measured in units of the mechanical frequency and all
//! detunings are taken from the bare cavity resonance.

pub mod error;
pub mod model;
pub mod overlap;
pub mod scattering;
pub mod spectra;
pub mod wavepacket;

pub use error::{Error, Result};
pub use model::{Geometry, SystemParams};
pub use scattering::{AmplitudeSet, NMax, Scatterer, SolverConfig};
