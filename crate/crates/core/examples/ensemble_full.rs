// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! A few atoms sharing the cavity, solved with the full master equation.
//! The bundled eight-atom preset takes much longer; this uses three.
//!
//! ```text
//! cargo run --release --example ensemble_full -- [n_atoms] [t_end]
//! ```

use superlaser::presets;
use superlaser::quantum::{init_ensemble, simulate_full, FullSettings, FullState, HilbertSpace};

fn main() -> superlaser::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_atoms: usize = args.next().map_or(3, |a| a.parse().expect("atom count"));
    let t_end: f64 = args.next().map_or(20.0, |a| a.parse().expect("end time"));

    let mut params = presets::find("fig6")?.config().params;
    params.n_atoms = n_atoms;
    let space = HilbertSpace::new(n_atoms, params.n_max)?;
    println!("Hilbert space dimension {}", space.dim());
    let phases = init_ensemble(n_atoms, (2.0, 2.5), 1)?;
    let traj = simulate_full(&params, &space, FullState::ground(&space, phases), t_end, &FullSettings::default())?;

    for r in traj.records.iter().step_by(20) {
        let ps: Vec<String> = r.phases.iter().map(|ph| format!("{:+.2}", ph.p)).collect();
        println!(
            "t {:>5.1}  n {:.3e}  p [{}]  worst trace error {:.1e}",
            r.t,
            r.observables.n_photon,
            ps.join(" "),
            r.diagnostics.trace_error
        );
    }
    Ok(())
}
