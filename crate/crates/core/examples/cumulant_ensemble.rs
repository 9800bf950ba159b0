// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Tens of atoms with the second-order cumulant equations. Reports which
//! atoms end up trapped and which keep moving.
//!
//! ```text
//! cargo run --release --example cumulant_ensemble -- [n_atoms] [t_end]
//! ```

use superlaser::cumulant::{memory_and_count, simulate_cumulant, CumulantSettings, CumulantState, Multiplicity};
use superlaser::presets;
use superlaser::quantum::init_ensemble;

fn main() -> superlaser::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_atoms: usize = args.next().map_or(20, |a| a.parse().expect("atom count"));
    let t_end: f64 = args.next().map_or(100.0, |a| a.parse().expect("end time"));

    let mut params = presets::find("fig7")?.config().params;
    params.n_atoms = n_atoms;
    let mult = Multiplicity::uniform(n_atoms);
    println!("{} real moments", memory_and_count(n_atoms));
    let init = CumulantState::ground(&init_ensemble(n_atoms, (2.0, 2.5), 1)?, &mult)?;
    let traj = simulate_cumulant(&params, init, &mult, (0.0, t_end), &CumulantSettings::default())?;

    for r in traj.records.iter().step_by(100) {
        let o = &r.observables;
        let inv = o.inversion.iter().sum::<f64>() / n_atoms as f64;
        println!("t {:>6.1}  n_laser {:.3e}  n_scatter {:.3e}  mean inversion {:+.4}", r.t, o.n_laser, o.n_scatter, inv);
    }
    // An atom counts as trapped when it stayed within one period of the
    // standing wave over the last 10/Γ.
    let tail = &traj.records[traj.records.len().saturating_sub(100)..];
    let trapped = (0..n_atoms)
        .filter(|&m| {
            let xs = tail.iter().map(|r| r.phases[m].x);
            let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            hi - lo < 2.0 * std::f64::consts::PI
        })
        .count();
    println!("trapped {trapped} of {n_atoms}; solver {:?}", traj.stats);
    Ok(())
}
