// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Scans the pump tone (η, Δη) the way `superlaser run --set` overrides do
//! and runs the points in parallel.
//!
//! ```text
//! cargo run --release --example drive_sweep
//! ```

use rayon::prelude::*;

use superlaser::config::{apply_override, RunConfig};
use superlaser::output::Sample;
use superlaser::presets;
use superlaser::quantum::{simulate_full, FullSettings, FullState, HilbertSpace};
use superlaser::run::summarize;

fn main() -> superlaser::Result<()> {
    let base: serde_json::Value = serde_json::from_str(presets::find("fig5")?.json())?;
    let mut points = Vec::new();
    for eta in [4.0, 8.0, 12.0] {
        for delta_eta in [-30.0, -25.0, -20.0] {
            let mut v = base.clone();
            apply_override(&mut v, &format!("params.eta={eta}"))?;
            apply_override(&mut v, &format!("params.delta_eta={delta_eta}"))?;
            apply_override(&mut v, "integration.t_end=50")?;
            points.push(RunConfig::from_value(v)?);
        }
    }

    let rows: Vec<String> = points
        .par_iter()
        .map(|c| -> superlaser::Result<String> {
            let p = &c.params;
            let space = HilbertSpace::new(p.n_atoms, p.n_max)?;
            let init = FullState::ground(&space, c.init.phases.clone().unwrap_or_default());
            let traj = simulate_full(p, &space, init, c.integration.t_end, &FullSettings::default())?;
            let samples: Vec<Sample<'_>> = traj
                .records
                .iter()
                .map(|r| Sample {
                    t: r.t,
                    observables: &r.observables,
                    phases: &r.phases,
                })
                .collect();
            let s = summarize(&samples, c.spectrum.window);
            Ok(format!(
                "{:>5.1} {:>7.1} {:>11.3e} {:>11.3e} {:>8.1}% {:>8.3}",
                p.eta,
                p.delta_eta,
                s.mean_n_laser,
                s.mean_n_scatter,
                100.0 * s.positive_inversion_fraction,
                s.mean_p[0]
            ))
        })
        .collect::<superlaser::Result<_>>()?;

    println!("{:>5} {:>7} {:>11} {:>11} {:>9} {:>8}", "eta", "d_eta", "n_laser", "n_scatter", "inv>0", "p late");
    for r in rows {
        println!("{r}");
    }
    Ok(())
}
