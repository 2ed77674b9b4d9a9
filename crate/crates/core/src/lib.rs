//! Spin decoherence of a spin-1/2 wave packet moving through curved spacetime.
//!
//! A wave packet with a momentum spread picks up *momentum-dependent* Wigner
//! rotations as its local Lorentz frame changes along the trajectory. Tracing
//! out the momentum then leaves a mixed spin state: the packet's spin entropy
//! grows even though every individual momentum component evolves unitarily.
//!
//! The crate is organised along the pipeline:
//!
//! * [`spacetime`] — Schwarzschild metric, Christoffel symbols, and the static
//!   orthonormal tetrad (plus a finite-difference backend for user-supplied
//!   diagonal metrics).
//! * [`kinematics`] — trajectories (circular orbits and user-supplied world
//!   lines), four-acceleration, local-frame momentum, and the Lorentz
//!   generator that drives both momentum transport and spin rotation.
//! * [`wigner`] — the infinitesimal Wigner rotation of a momentum mode, the
//!   momentum transport map, and SU(2) rotor accumulation.
//! * [`wavepacket`] — Gauss-Hermite discretisation of the initial Gaussian
//!   packet into weighted momentum samples.
//! * [`evolution`] — the proper-time simulation loop, the reduced spin density
//!   matrix, entropy, and the closed-form decoherence-time law.
//!
//! # Units
//!
//! Everything internal is geometric: `c = 1`, particle mass `m = 1`, and the
//! Schwarzschild radius `r_s = 1` whenever `r_s > 0` (`r_s = 0` selects flat
//! spacetime, with the orbit radius as the length unit). User-facing inputs
//! are the dimensionless groups `v/c`, `r/r_s` and `w/(mc)`; proper times are
//! reported in units of `tau_s = m r_s / w`.

// Tensor contractions read better as explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod evolution;
pub mod kinematics;
pub mod spacetime;
pub mod wavepacket;
pub mod wigner;

pub use error::{Error, Result};
pub use evolution::{
    decoherence_time, run_simulation, DecoherenceParams, DecoherenceTime, SimulationResult,
};
pub use kinematics::{CircularOrbit, FourVelocity, LorentzGenerator, WorldLine};
pub use spacetime::{Schwarzschild, SpacetimePoint, Tetrad};
pub use wavepacket::{MomentumSample, PacketSpec};
pub use wigner::SpinRotor;
