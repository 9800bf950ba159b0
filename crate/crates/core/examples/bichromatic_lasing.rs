// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! A second drive tone pumps the dressed-state resonance. Prints the photon
//! number split into its laser and scattered parts along with the inversion.
//!
//! ```text
//! cargo run --release --example bichromatic_lasing -- [eta] [delta_eta]
//! ```

use superlaser::output::Sample;
use superlaser::presets;
use superlaser::quantum::{simulate_full, FullSettings, FullState, HilbertSpace};
use superlaser::run::summarize;

fn main() -> superlaser::Result<()> {
    let mut config = presets::find("fig5")?.config();
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    if let Some(eta) = args.next() {
        config.params.eta = eta;
    }
    if let Some(delta_eta) = args.next() {
        config.params.delta_eta = delta_eta;
    }
    let p = &config.params;
    let space = HilbertSpace::new(p.n_atoms, p.n_max)?;
    let init = FullState::ground(&space, config.init.phases.clone().unwrap_or_default());
    let traj = simulate_full(p, &space, init, config.integration.t_end, &FullSettings::default())?;

    println!("{:>6} {:>10} {:>10} {:>11} {:>11} {:>8}", "t", "x", "p", "n_laser", "n_scatter", "inv");
    for r in traj.records.iter().step_by(50) {
        let o = &r.observables;
        println!(
            "{:>6.1} {:>10.3} {:>10.4} {:>11.3e} {:>11.3e} {:>8.4}",
            r.t, r.phases[0].x, r.phases[0].p, o.n_laser, o.n_scatter, o.inversion[0]
        );
    }
    let samples: Vec<Sample<'_>> = traj
        .records
        .iter()
        .map(|r| Sample {
            t: r.t,
            observables: &r.observables,
            phases: &r.phases,
        })
        .collect();
    let s = summarize(&samples, config.spectrum.window);
    println!(
        "late window {:?}: n_laser {:.3e}, n_scatter {:.3e}, positive inversion in {:.1}% of samples",
        s.window,
        s.mean_n_laser,
        s.mean_n_scatter,
        100.0 * s.positive_inversion_fraction
    );
    Ok(())
}
