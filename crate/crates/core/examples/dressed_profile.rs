// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Light-shifted levels and dipole forces along a standing-wave drive.
//!
//! ```text
//! cargo run --example dressed_profile
//! ```

use std::f64::consts::PI;

use superlaser::model::{dressed_eigenvalues, light_shift_profile, mixing_angle, regime_check};
use superlaser::presets;

fn main() -> superlaser::Result<()> {
    let params = presets::find("fig3")?.config().params;

    let (e_plus, e_minus) = dressed_eigenvalues(params.omega_drive, params.delta_a);
    let theta = mixing_angle(params.omega_drive, params.delta_a)?;
    println!("antinode: E+ = {e_plus:.4}, E- = {e_minus:.4}, theta = {theta:.4} rad");

    println!("{:>8} {:>10} {:>10} {:>8} {:>10}", "x/pi", "E+", "E-", "theta", "F+");
    let xs: Vec<f64> = (0..=8).map(|k| k as f64 * PI / 8.0).collect();
    for p in light_shift_profile(&params, &xs) {
        println!(
            "{:>8.3} {:>10.4} {:>10.4} {:>8.4} {:>10.4}",
            p.x / PI,
            p.e_plus,
            p.e_minus,
            p.theta,
            p.f_plus
        );
    }

    let regime = regime_check(&params);
    println!("bad cavity: {:?}", regime.bad_cavity);
    println!("far red detuned: {:?}", regime.far_red_detuned);
    println!("light shift > kappa: {:?}", regime.light_shift_exceeds_linewidth);
    Ok(())
}
