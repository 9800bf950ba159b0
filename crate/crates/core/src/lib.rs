// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation engine for a two-level superradiant laser whose gain is
//! produced by state-dependent optical forces.
//!
//! Atoms move semiclassically along the axis of a single-mode cavity
//! (sine mode, coupling `g sin x`) while a standing-wave pump
//! (`Ω cos x`, optionally bichromatic with a second tone `η cos x`)
//! light-shifts and excites them. The crate provides:
//!
//! - [`model`]: parameters, dressed-state energies, mixing angles, light
//!   forces and the operating-regime check.
//! - [`ode`]: an adaptive Dormand–Prince 5(4) integrator with dense output
//!   over flat real vectors (complex values interleaved).
//! - [`quantum`]: the full Lindblad master equation for a few atoms in a
//!   truncated Fock space, coupled to per-atom semiclassical motion.
//! - [`cumulant`]: the second-order cumulant (mean-field corrected) moment
//!   system for ensembles of hundreds of atoms.
//! - [`spectrum`]: two-time field correlations, Wiener–Khinchin transform,
//!   peak finding and motional sideband prediction.
//! - [`config`], [`presets`] and [`run`]: JSON run configurations, bundled
//!   parameter sets and the scenario runner behind the `superlaser` binary.
//!
//! All rates and detunings are in units of the atomic decay rate Γ, time in
//! units of 1/Γ, positions as the phase `k x` and momenta in units of `ħk`.

pub mod config;
pub mod cumulant;
pub mod error;
pub mod model;
pub mod observables;
pub mod ode;
pub mod output;
pub mod presets;
pub mod quantum;
pub mod run;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::{AtomPhase, PhysParams};
