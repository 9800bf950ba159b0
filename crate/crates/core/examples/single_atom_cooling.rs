// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! One atom under a monochromatic drive: the light force cools it into a
//! well of the standing wave and the inversion stays negative.
//!
//! ```text
//! cargo run --release --example single_atom_cooling
//! ```

use superlaser::presets;
use superlaser::quantum::{simulate_full, FullSettings, FullState, HilbertSpace};

fn main() -> superlaser::Result<()> {
    let config = presets::find("fig3")?.config();
    let p = &config.params;
    let space = HilbertSpace::new(p.n_atoms, p.n_max)?;
    let phases = config.init.phases.clone().unwrap_or_default();
    let traj = simulate_full(
        p,
        &space,
        FullState::ground(&space, phases),
        config.integration.t_end,
        &FullSettings::default(),
    )?;

    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "t", "x", "p", "E_kin max", "inv max");
    for window in traj.records.chunks(100) {
        let last = window.last().unwrap();
        let e_kin = window.iter().map(|r| r.phases[0].kinetic_energy(p.omega_r)).fold(0.0, f64::max);
        let inv = window.iter().map(|r| r.observables.inversion[0]).fold(-1.0, f64::max);
        println!(
            "{:>6.1} {:>10.3} {:>10.4} {:>10.4} {:>10.4}",
            last.t, last.phases[0].x, last.phases[0].p, e_kin, inv
        );
    }
    println!("solver: {:?}", traj.stats);
    Ok(())
}
