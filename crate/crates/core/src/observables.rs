// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C64;

/// Cavity and atomic observables recorded at each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    /// `⟨a†a⟩`.
    pub n_photon: f64,
    /// `⟨a⟩`.
    pub a_mean: C64,
    /// `⟨a†a⟩ − |⟨a⟩|²`, the part emitted incoherently by the atoms.
    pub n_laser: f64,
    /// `|⟨a⟩|²`, the coherently scattered drive light.
    pub n_scatter: f64,
    /// `⟨σz⟩ = 2⟨σ⁺σ⁻⟩ − 1` per atom.
    pub inversion: Vec<f64>,
}

impl Observables {
    pub fn new(n_photon: f64, a_mean: C64, inversion: Vec<f64>) -> Self {
        let n_scatter = a_mean.norm_sqr();
        Observables {
            n_photon,
            a_mean,
            n_laser: n_photon - n_scatter,
            n_scatter,
            inversion,
        }
    }
}
