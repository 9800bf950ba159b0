// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Output spectrum of a small ensemble: late-time anchors, averaged field
//! correlation, Wiener–Khinchin transform and peak list.
//!
//! ```text
//! cargo run --release --example cavity_spectrum -- [n_atoms]
//! ```

use superlaser::cumulant::{simulate_cumulant, CumulantSettings, CumulantState, Multiplicity};
use superlaser::presets;
use superlaser::quantum::init_ensemble;
use superlaser::spectrum::{average_g1, sideband_frequencies, wiener_khinchin};

fn main() -> superlaser::Result<()> {
    let n_atoms: usize = std::env::args().nth(1).map_or(10, |a| a.parse().expect("atom count"));
    let mut config = presets::find("fig8")?.config();
    config.params.n_atoms = n_atoms;
    let (p, s) = (&config.params, &config.spectrum);
    let t_end = config.integration.t_end;

    let mult = Multiplicity::uniform(n_atoms);
    let init = CumulantState::ground(&init_ensemble(n_atoms, (2.0, 2.5), config.init.seed)?, &mult)?;
    let settings = CumulantSettings {
        keep_states_from: Some(t_end - s.window),
        ..CumulantSettings::default()
    };
    let traj = simulate_cumulant(p, init, &mult, (0.0, t_end), &settings)?;

    let corr = s.correlation(config.integration.tolerances());
    let g1 = average_g1(&traj.snapshots, p, &mult, s.n_anchors, s.window, &corr)?;
    let mut spectrum = wiener_khinchin(&g1.g1, g1.dtau, p.delta_a, &s.transform())?;
    spectrum.detect_peaks(s.min_prominence);
    println!("g1(0) = {:.4e}, grid spacing {:.4}", g1.g1[0].re, spectrum.bin_width());

    let mut peaks = spectrum.peaks.clone();
    peaks.sort_by(|a, b| b.height.total_cmp(&a.height));
    println!("{:>10} {:>10} {:>10}", "center", "height", "fwhm");
    for pk in peaks.iter().take(8) {
        println!("{:>10.4} {:>10.3e} {:>10.4}", pk.center, pk.height, pk.fwhm);
    }
    let (up, down) = sideband_frequencies(p.omega_r, 2.0);
    println!("sidebands expected at {up:+.1} / {down:+.1} for atoms moving at |p| = 2");
    Ok(())
}
