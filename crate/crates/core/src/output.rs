// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON file schemas.
//!
//! Every CSV has a header row, `,` separators and `.` decimals. Floats are
//! printed with the shortest representation that round-trips (scientific
//! notation for very small or large magnitudes), so equal runs give
//! byte-equal files.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cumulant::{CumulantState, Layout, Multiplicity};
use crate::error::{Error, Result};
use crate::model::{AtomPhase, DressedPoint};
use crate::observables::Observables;
use crate::quantum::StateDiagnostics;
use crate::spectrum::{CorrelationSeries, Peak, SpectrumResult};

/// Bumped whenever a column set or JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Atom counts above this switch the trajectory file to long format.
pub const WIDE_ATOM_LIMIT: usize = 256;

/// One sampled time point of any solver.
#[derive(Debug, Clone, Copy)]
pub struct Sample<'a> {
    pub t: f64,
    pub observables: &'a Observables,
    pub phases: &'a [AtomPhase],
}

/// An in-memory file: name relative to the output directory, header and body.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub columns: Vec<String>,
    pub body: String,
}

impl Table {
    fn new(file: String, columns: Vec<String>) -> Self {
        Table {
            file,
            columns,
            body: String::new(),
        }
    }

    fn row(&mut self, cells: impl IntoIterator<Item = f64>) {
        let mut first = true;
        for v in cells {
            if !first {
                self.body.push(',');
            }
            first = false;
            write!(self.body, "{v:?}").expect("writing to a String");
        }
        self.body.push('\n');
    }

    pub fn render(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        s.push_str(&self.body);
        s
    }
}

/// Per-atom trajectory: wide (`t,x_1..x_N,p_1..p_N,inv_1..inv_N`) up to
/// [`WIDE_ATOM_LIMIT`] atoms, long (`t,atom,x,p,inv`) beyond.
pub fn trajectory_table(name: &str, samples: &[Sample<'_>]) -> Table {
    let n = samples.first().map_or(0, |s| s.phases.len());
    let file = format!("{name}_trajectory.csv");
    if n > WIDE_ATOM_LIMIT {
        let cols = ["t", "atom", "x", "p", "inv"].map(String::from).to_vec();
        let mut table = Table::new(file, cols);
        for s in samples {
            for (m, ph) in s.phases.iter().enumerate() {
                table.row([s.t, (m + 1) as f64, ph.x, ph.p, s.observables.inversion[m]]);
            }
        }
        return table;
    }
    let mut cols = vec!["t".to_string()];
    for prefix in ["x", "p", "inv"] {
        cols.extend((1..=n).map(|m| format!("{prefix}_{m}")));
    }
    let mut table = Table::new(file, cols);
    for s in samples {
        let row = std::iter::once(s.t)
            .chain(s.phases.iter().map(|ph| ph.x))
            .chain(s.phases.iter().map(|ph| ph.p))
            .chain(s.observables.inversion.iter().copied());
        table.row(row);
    }
    table
}

pub const OBSERVABLE_COLUMNS: [&str; 8] = [
    "t",
    "n_photon",
    "n_laser",
    "n_scatter",
    "re_a",
    "im_a",
    "mean_inversion",
    "mean_kinetic",
];

/// Cavity observables plus ensemble means of inversion and `ω_r p²`.
pub fn observables_table(name: &str, samples: &[Sample<'_>], omega_r: f64) -> Table {
    let mut table = Table::new(
        format!("{name}_observables.csv"),
        OBSERVABLE_COLUMNS.map(String::from).to_vec(),
    );
    for s in samples {
        let o = s.observables;
        let n = s.phases.len().max(1) as f64;
        let inv = o.inversion.iter().sum::<f64>() / n;
        let kin = s.phases.iter().map(|ph| ph.kinetic_energy(omega_r)).sum::<f64>() / n;
        table.row([s.t, o.n_photon, o.n_laser, o.n_scatter, o.a_mean.re, o.a_mean.im, inv, kin]);
    }
    table
}

/// Density-matrix health per sample. `min_eigenvalue` is left empty when it
/// was not computed (large spaces).
pub fn diagnostics_table(name: &str, rows: &[(f64, StateDiagnostics)]) -> Table {
    let cols = ["t", "trace_error", "hermiticity", "min_eigenvalue", "min_diagonal"];
    let mut table = Table::new(format!("{name}_diagnostics.csv"), cols.map(String::from).to_vec());
    for (t, d) in rows {
        let eig = d.min_eigenvalue.map_or(String::new(), |v| format!("{v:?}"));
        writeln!(table.body, "{t:?},{:?},{:?},{eig},{:?}", d.trace_error, d.hermiticity, d.min_diagonal)
            .expect("writing to a String");
    }
    table
}

pub fn dressed_table(name: &str, points: &[DressedPoint]) -> Table {
    let cols = ["x", "e_plus", "e_minus", "theta", "f_plus", "f_minus"];
    let mut table = Table::new(format!("{name}_dressed.csv"), cols.map(String::from).to_vec());
    for p in points {
        table.row([p.x, p.e_plus, p.e_minus, p.theta, p.f_plus, p.f_minus]);
    }
    table
}

pub fn spectrum_table(name: &str, spectrum: &SpectrumResult) -> Table {
    let cols = ["omega_minus_omega_a", "s_normalized", "s_raw", "omega_frame"];
    let mut table = Table::new(format!("{name}_spectrum.csv"), cols.map(String::from).to_vec());
    for (((w, sn), s), wf) in spectrum
        .omega
        .iter()
        .zip(spectrum.normalized())
        .zip(&spectrum.s)
        .zip(&spectrum.omega_frame)
    {
        table.row([*w, sn, *s, *wf]);
    }
    table
}

pub fn g1_table(name: &str, series: &CorrelationSeries) -> Table {
    let cols = ["tau", "re_g1", "im_g1"];
    let mut table = Table::new(format!("{name}_g1.csv"), cols.map(String::from).to_vec());
    for (k, z) in series.g1.iter().enumerate() {
        table.row([series.tau(k), z.re, z.im]);
    }
    table
}

pub fn peaks_json(peaks: &[Peak]) -> Result<String> {
    Ok(serde_json::to_string_pretty(peaks)? + "\n")
}

/// Stored moment vectors used as correlation anchors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorFile {
    pub schema_version: u32,
    pub n_atoms: usize,
    pub multiplicity: Multiplicity,
    /// Mean `|p|` of the atoms in steady linear motion over the anchor
    /// window; `None` when no atom qualifies.
    pub p_stationary: Option<f64>,
    pub anchors: Vec<AnchorEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorEntry {
    pub t: f64,
    pub state: Vec<f64>,
}

impl AnchorFile {
    pub fn new(anchors: &[(f64, CumulantState)], multiplicity: Multiplicity, p_stationary: Option<f64>) -> Self {
        AnchorFile {
            schema_version: SCHEMA_VERSION,
            n_atoms: multiplicity.len(),
            multiplicity,
            p_stationary,
            anchors: anchors
                .iter()
                .map(|(t, s)| AnchorEntry {
                    t: *t,
                    state: s.as_slice().to_vec(),
                })
                .collect(),
        }
    }

    pub fn states(&self) -> Result<Vec<(f64, CumulantState)>> {
        if self.multiplicity.len() != self.n_atoms {
            return Err(Error::Config("anchor file: multiplicity length differs from n_atoms".into()));
        }
        let layout = Layout::for_multiplicity(&self.multiplicity);
        self.anchors
            .iter()
            .map(|a| Ok((a.t, CumulantState::from_vec(layout, a.state.clone())?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    fn obs(inv: Vec<f64>) -> Observables {
        Observables::new(0.5, C64::new(0.1, -0.2), inv)
    }

    #[test]
    fn wide_trajectory_layout() {
        let o = obs(vec![-1.0, 0.25]);
        let ph = [AtomPhase::new(1.0, 2.0), AtomPhase::new(3.0, -4.0)];
        let s = [Sample { t: 0.5, observables: &o, phases: &ph }];
        let t = trajectory_table("run", &s);
        assert_eq!(t.file, "run_trajectory.csv");
        assert_eq!(t.render(), "t,x_1,x_2,p_1,p_2,inv_1,inv_2\n0.5,1.0,3.0,2.0,-4.0,-1.0,0.25\n");
    }

    #[test]
    fn long_trajectory_above_limit() {
        let n = WIDE_ATOM_LIMIT + 1;
        let o = obs(vec![0.0; n]);
        let ph = vec![AtomPhase::new(0.0, 1.0); n];
        let t = trajectory_table("big", &[Sample { t: 1.0, observables: &o, phases: &ph }]);
        assert_eq!(t.columns, ["t", "atom", "x", "p", "inv"]);
        assert_eq!(t.body.lines().count(), n);
        assert!(t.body.starts_with("1.0,1.0,0.0,1.0,0.0\n"));
    }

    #[test]
    fn observables_row() {
        let o = obs(vec![0.5, -0.5]);
        let ph = [AtomPhase::new(0.0, 1.0), AtomPhase::new(0.0, -3.0)];
        let t = observables_table("r", &[Sample { t: 2.0, observables: &o, phases: &ph }], 0.5);
        let line = t.body.trim_end();
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(v[0], 2.0);
        assert!((v[2] - (0.5 - 0.05)).abs() < 1e-15);
        assert_eq!(v[6], 0.0);
        assert_eq!(v[7], 0.5 * (1.0 + 9.0) / 2.0);
    }

    #[test]
    fn floats_round_trip_through_text() {
        let x = 0.1 + 0.2;
        let mut t = Table::new("f.csv".into(), vec!["v".into()]);
        t.row([x]);
        assert_eq!(t.body.trim_end().parse::<f64>().unwrap(), x);
    }

    #[test]
    fn anchor_file_round_trip() {
        let mult = Multiplicity::uniform(2);
        let ph = [AtomPhase::new(0.3, 1.0 / 3.0), AtomPhase::new(2.0, -0.7)];
        let mut s = CumulantState::ground(&ph, &mult).unwrap();
        s.set_a_mean(C64::new(0.1, std::f64::consts::E));
        let file = AnchorFile::new(&[(1.5, s.clone())], mult, Some(2.1));
        let text = serde_json::to_string(&file).unwrap();
        let back: AnchorFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.states().unwrap()[0].1.as_slice(), s.as_slice());
    }
}
