// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Second-order cumulant equations for an ensemble with semiclassical motion.
//!
//! Tracked moments: `⟨a⟩`, `⟨a†a⟩`, and per atom `⟨σ⁻_m⟩`, `⟨aσ⁺_m⟩`,
//! `⟨σ⁺_mσ⁻_m⟩`, `x_m`, `p_m`, plus the atom-atom correlations
//! `⟨σ⁺_mσ⁻_j⟩` for `m < j` (the `m > j` entries are their conjugates).
//! Third-order products are factorised with mean-field factors
//! `(2⟨σ⁺_mσ⁻_m⟩ − 1)`; the count of real components grows as `N²`.
//!
//! A tracked atom may stand for a cluster of `N_m` identical atoms
//! ([`Multiplicity`]). The cluster then also carries the correlation between
//! two distinct members of the same cluster, which enters the `⟨aσ⁺_m⟩`
//! equation with weight `N_m − 1`.
//!
//! Packed layout of the real state vector:
//!
//! ```text
//! [Re⟨a⟩, Im⟨a⟩, ⟨a†a⟩,
//!  per atom m: Re⟨σ⁻⟩, Im⟨σ⁻⟩, Re⟨aσ⁺⟩, Im⟨aσ⁺⟩, ⟨σ⁺σ⁻⟩, x, p,
//!  per pair m<j (row-major): Re⟨σ⁺_mσ⁻_j⟩, Im⟨σ⁺_mσ⁻_j⟩,
//!  per atom, only with clusters: intra-cluster correlation]
//! ```

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AtomPhase, PhysParams};
use crate::observables::Observables;
use crate::ode::{self, OdeError, OdeProblem, Settings, SolverStats, Tolerances};

const ATOM_STRIDE: usize = 7;
const HEADER: usize = 3;

/// Real components for `n` atoms of multiplicity one: `3 + 7N + N(N−1)`.
pub fn memory_and_count(n: usize) -> usize {
    HEADER + ATOM_STRIDE * n + n * n.saturating_sub(1)
}

/// Number of identical atoms represented by each tracked atom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiplicity(Vec<u32>);

impl Multiplicity {
    pub fn uniform(n_atoms: usize) -> Self {
        Multiplicity(vec![1; n_atoms])
    }

    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidParams("multiplicities must be >= 1".into()));
        }
        Ok(Multiplicity(weights))
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&w| w == 1)
    }

    pub fn total_atoms(&self) -> u64 {
        self.0.iter().map(|&w| u64::from(w)).sum()
    }
}

/// Index arithmetic of the packed moment vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    n: usize,
    clusters: bool,
}

impl Layout {
    pub fn new(n_atoms: usize, clusters: bool) -> Self {
        Layout { n: n_atoms, clusters }
    }

    pub fn for_multiplicity(mult: &Multiplicity) -> Self {
        Layout::new(mult.len(), !mult.is_trivial())
    }

    pub fn n_atoms(&self) -> usize {
        self.n
    }

    pub fn has_clusters(&self) -> bool {
        self.clusters
    }

    pub fn len(&self) -> usize {
        memory_and_count(self.n) + if self.clusters { self.n } else { 0 }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn atom(&self, m: usize) -> usize {
        HEADER + ATOM_STRIDE * m
    }

    #[inline]
    fn pairs_start(&self) -> usize {
        HEADER + ATOM_STRIDE * self.n
    }

    /// Offset of `⟨σ⁺_mσ⁻_j⟩` for `m < j`.
    #[inline]
    pub fn pair(&self, m: usize, j: usize) -> usize {
        debug_assert!(m < j && j < self.n);
        let row = m * (2 * self.n - m - 1) / 2;
        self.pairs_start() + 2 * (row + j - m - 1)
    }

    #[inline]
    fn intra(&self, m: usize) -> usize {
        self.pairs_start() + self.n * (self.n - 1) + m
    }

    /// Human-readable name of a packed component, for diagnostics.
    pub fn component_name(&self, index: usize) -> String {
        let part = |k: usize| if k % 2 == 0 { "re" } else { "im" };
        match index {
            0 | 1 => format!("{} <a>", part(index)),
            2 => "<a+a>".into(),
            i if i < self.pairs_start() => {
                let m = (i - HEADER) / ATOM_STRIDE;
                let name = match (i - HEADER) % ATOM_STRIDE {
                    0 => "re <s->",
                    1 => "im <s->",
                    2 => "re <a s+>",
                    3 => "im <a s+>",
                    4 => "<s+ s->",
                    5 => "x",
                    _ => "p",
                };
                format!("{name} of atom {m}")
            }
            i if i < self.pairs_start() + self.n * (self.n - 1) => {
                let k = (i - self.pairs_start()) / 2;
                let (mut m, mut rest) = (0, k);
                while rest >= self.n - m - 1 {
                    rest -= self.n - m - 1;
                    m += 1;
                }
                format!("{} <s+_{m} s-_{}>", part(i - self.pairs_start()), m + 1 + rest)
            }
            i => format!("intra-cluster <s+ s-> of atom {}", i - self.pairs_start() - self.n * (self.n - 1)),
        }
    }
}

/// Packed cumulant state with typed accessors.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantState {
    layout: Layout,
    data: Vec<f64>,
}

#[inline]
fn get_c(y: &[f64], i: usize) -> C64 {
    C64::new(y[i], y[i + 1])
}

#[inline]
fn set_c(y: &mut [f64], i: usize, z: C64) {
    y[i] = z.re;
    y[i + 1] = z.im;
}

impl CumulantState {
    /// Uncorrelated cold start: ground-state atoms, empty cavity, zero
    /// correlations, atoms at the given phase-space points.
    pub fn ground(phases: &[AtomPhase], mult: &Multiplicity) -> Result<Self> {
        if phases.len() != mult.len() {
            return Err(Error::InvalidParams(format!(
                "{} phases for {} tracked atoms",
                phases.len(),
                mult.len()
            )));
        }
        let layout = Layout::for_multiplicity(mult);
        let mut s = CumulantState {
            layout,
            data: vec![0.0; layout.len()],
        };
        for (m, ph) in phases.iter().enumerate() {
            s.set_phase(m, *ph);
        }
        Ok(s)
    }

    pub fn from_vec(layout: Layout, data: Vec<f64>) -> Result<Self> {
        if data.len() != layout.len() {
            return Err(Error::InvalidParams(format!(
                "moment vector has {} components, layout expects {}",
                data.len(),
                layout.len()
            )));
        }
        Ok(CumulantState { layout, data })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn n_atoms(&self) -> usize {
        self.layout.n
    }

    pub fn a_mean(&self) -> C64 {
        get_c(&self.data, 0)
    }

    pub fn set_a_mean(&mut self, z: C64) {
        set_c(&mut self.data, 0, z);
    }

    pub fn n_photon(&self) -> f64 {
        self.data[2]
    }

    pub fn set_n_photon(&mut self, n: f64) {
        self.data[2] = n;
    }

    pub fn sigma_minus(&self, m: usize) -> C64 {
        get_c(&self.data, self.layout.atom(m))
    }

    pub fn set_sigma_minus(&mut self, m: usize, z: C64) {
        let i = self.layout.atom(m);
        set_c(&mut self.data, i, z);
    }

    /// `⟨aσ⁺_m⟩`.
    pub fn a_sigma_plus(&self, m: usize) -> C64 {
        get_c(&self.data, self.layout.atom(m) + 2)
    }

    pub fn set_a_sigma_plus(&mut self, m: usize, z: C64) {
        let i = self.layout.atom(m) + 2;
        set_c(&mut self.data, i, z);
    }

    /// `⟨σ⁺_mσ⁻_m⟩`.
    pub fn pop(&self, m: usize) -> f64 {
        self.data[self.layout.atom(m) + 4]
    }

    pub fn set_pop(&mut self, m: usize, v: f64) {
        let i = self.layout.atom(m) + 4;
        self.data[i] = v;
    }

    pub fn phase(&self, m: usize) -> AtomPhase {
        let i = self.layout.atom(m);
        AtomPhase::new(self.data[i + 5], self.data[i + 6])
    }

    pub fn set_phase(&mut self, m: usize, ph: AtomPhase) {
        let i = self.layout.atom(m);
        self.data[i + 5] = ph.x;
        self.data[i + 6] = ph.p;
    }

    pub fn phases(&self) -> Vec<AtomPhase> {
        (0..self.n_atoms()).map(|m| self.phase(m)).collect()
    }

    /// `⟨σ⁺_mσ⁻_j⟩` for any pair; the diagonal is the population.
    pub fn cross(&self, m: usize, j: usize) -> C64 {
        use std::cmp::Ordering::*;
        match m.cmp(&j) {
            Less => get_c(&self.data, self.layout.pair(m, j)),
            Greater => get_c(&self.data, self.layout.pair(j, m)).conj(),
            Equal => C64::new(self.pop(m), 0.0),
        }
    }

    /// Sets `⟨σ⁺_mσ⁻_j⟩` (and implicitly its conjugate partner); `m ≠ j`.
    pub fn set_cross(&mut self, m: usize, j: usize, z: C64) {
        assert_ne!(m, j, "the diagonal is the population");
        if m < j {
            let i = self.layout.pair(m, j);
            set_c(&mut self.data, i, z);
        } else {
            let i = self.layout.pair(j, m);
            set_c(&mut self.data, i, z.conj());
        }
    }

    /// Correlation between two distinct members of cluster `m`.
    pub fn intra_cluster(&self, m: usize) -> f64 {
        if self.layout.clusters {
            self.data[self.layout.intra(m)]
        } else {
            0.0
        }
    }

    /// Full `N×N` matrix `C[m][j] = ⟨σ⁺_mσ⁻_j⟩`, Hermitian by construction.
    pub fn cross_matrix(&self) -> Vec<Vec<C64>> {
        let n = self.n_atoms();
        (0..n).map(|m| (0..n).map(|j| self.cross(m, j)).collect()).collect()
    }

    pub fn observables(&self) -> Observables {
        Observables::new(
            self.n_photon(),
            self.a_mean(),
            (0..self.n_atoms()).map(|m| 2.0 * self.pop(m) - 1.0).collect(),
        )
    }
}

/// Per-atom quantities shared by several equations.
struct AtomTerms {
    sin: Vec<f64>,
    cos: Vec<f64>,
    /// `2⟨σ⁺σ⁻⟩ − 1`.
    z: Vec<f64>,
    sm: Vec<C64>,
    asp: Vec<C64>,
}

impl AtomTerms {
    fn read(layout: Layout, y: &[f64]) -> Self {
        let n = layout.n;
        let mut t = AtomTerms {
            sin: Vec::with_capacity(n),
            cos: Vec::with_capacity(n),
            z: Vec::with_capacity(n),
            sm: Vec::with_capacity(n),
            asp: Vec::with_capacity(n),
        };
        for m in 0..n {
            let i = layout.atom(m);
            let (s, c) = y[i + 5].sin_cos();
            t.sin.push(s);
            t.cos.push(c);
            t.z.push(2.0 * y[i + 4] - 1.0);
            t.sm.push(get_c(y, i));
            t.asp.push(get_c(y, i + 2));
        }
        t
    }
}

/// Right-hand side of the moment equations on packed vectors.
pub(crate) fn rhs_into(
    layout: Layout,
    params: &PhysParams,
    weights: &[u32],
    t: f64,
    y: &[f64],
    dy: &mut [f64],
) {
    let n = layout.n;
    let g = params.g;
    let i = C64::i();
    let drive = params.drive_amplitude(t);
    let drive_c = drive.conj();
    let at = AtomTerms::read(layout, y);
    let w: Vec<f64> = weights.iter().map(|&k| f64::from(k)).collect();

    let a = get_c(y, 0);
    let n_ph = y[2];

    // cavity: Σ_j N_j sin x_j ⟨σ⁻_j⟩ and Σ_j N_j sin x_j Im⟨aσ⁺_j⟩
    let mut field_source = C64::new(0.0, 0.0);
    let mut photon_gain = 0.0;
    for m in 0..n {
        field_source += w[m] * at.sin[m] * at.sm[m];
        photon_gain += w[m] * at.sin[m] * at.asp[m].im;
    }
    let da = -(0.5 * params.kappa - i * params.delta_c) * a - i * g * field_source;
    set_c(dy, 0, da);
    // i g Σ (⟨aσ⁺⟩ − ⟨a†σ⁻⟩) = −2g Σ Im⟨aσ⁺⟩
    dy[2] = -params.kappa * n_ph - 2.0 * g * photon_gain;

    // pair block; accumulates Σ_{j≠m} N_j sin x_j ⟨σ⁺_mσ⁻_j⟩ on the way
    let mut pair_sum = vec![C64::new(0.0, 0.0); n];
    let half_gamma_pair = -params.gamma;
    for m in 0..n {
        let sp_m = at.sm[m].conj();
        for j in (m + 1)..n {
            let k = layout.pair(m, j);
            let c = get_c(y, k);
            pair_sum[m] += w[j] * at.sin[j] * c;
            pair_sum[j] += w[m] * at.sin[m] * c.conj();
            let ads_j = at.asp[j].conj();
            let dc = (half_gamma_pair + i * (params.detuning(j) - params.detuning(m))) * c
                - i * g * at.sin[m] * ads_j * at.z[m]
                + i * g * at.sin[j] * at.asp[m] * at.z[j]
                + i * drive * at.cos[j] * sp_m * at.z[j]
                - i * drive_c * at.cos[m] * at.sm[j] * at.z[m];
            set_c(dy, k, dc);
        }
    }

    for m in 0..n {
        let base = layout.atom(m);
        let (s, c, z) = (at.sin[m], at.cos[m], at.z[m]);
        let pop = y[base + 4];
        let sm = at.sm[m];
        let sp = sm.conj();
        let asp = at.asp[m];
        let det = params.detuning(m);

        let dsm = -(0.5 * params.gamma - i * det) * sm + i * g * s * a * z + i * drive * c * z;
        set_c(dy, base, dsm);

        let mut cross = pair_sum[m];
        if layout.clusters {
            cross += (w[m] - 1.0) * s * y[layout.intra(m)];
        }
        let dasp = -(0.5 * params.kappa + 0.5 * params.gamma + i * det - i * params.delta_c) * asp
            + i * g * s * (n_ph - 2.0 * n_ph * pop - pop)
            - i * g * cross
            - i * drive_c * c * a * z;
        set_c(dy, base + 2, dasp);

        // −ig s (⟨aσ⁺⟩ − ⟨a†σ⁻⟩) − i D c ⟨σ⁺⟩ + i D* c ⟨σ⁻⟩
        let dpop = -params.gamma * pop + 2.0 * g * s * asp.im + 2.0 * c * (drive * sp).im;
        dy[base + 4] = dpop;

        dy[base + 5] = 2.0 * params.omega_r * y[base + 6];
        dy[base + 6] = -2.0 * g * c * asp.re + 2.0 * s * (drive * sp).re;

        if layout.clusters {
            let k = layout.intra(m);
            // pair equation for two identical members; the result is real
            let dintra = -params.gamma * y[k] + 2.0 * z * (-g * s * asp.im - c * (drive * sp).im);
            dy[k] = dintra;
        }
    }
}

/// Time derivative of `state`.
pub fn cumulant_rhs(state: &CumulantState, params: &PhysParams, mult: &Multiplicity, t: f64) -> CumulantState {
    let layout = state.layout;
    assert_eq!(layout, Layout::for_multiplicity(mult), "state layout does not match multiplicities");
    let mut dy = vec![0.0; layout.len()];
    rhs_into(layout, params, mult.weights(), t, &state.data, &mut dy);
    CumulantState { layout, data: dy }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulantSettings {
    pub tol: Tolerances,
    pub sample_dt: f64,
    /// Keep full moment vectors for samples with `t >= keep_states_from`
    /// (needed later as correlation anchors).
    pub keep_states_from: Option<f64>,
}

impl Default for CumulantSettings {
    fn default() -> Self {
        CumulantSettings {
            tol: Tolerances::default(),
            sample_dt: 0.1,
            keep_states_from: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CumulantRecord {
    pub t: f64,
    pub observables: Observables,
    pub phases: Vec<AtomPhase>,
}

#[derive(Debug, Clone)]
pub struct CumulantTrajectory {
    pub records: Vec<CumulantRecord>,
    /// `(t, state)` for every kept sample.
    pub snapshots: Vec<(f64, CumulantState)>,
    pub final_state: CumulantState,
    pub stats: SolverStats,
}

pub(crate) fn map_ode_error(layout: Layout, e: OdeError) -> Error {
    match e {
        OdeError::NonFinite { t, index } if index < layout.len() => Error::NonFiniteMoment {
            moment: layout.component_name(index),
            t,
        },
        other => Error::Integration(other),
    }
}

/// Integrates the moment equations from `t0` to `t_end`.
pub fn simulate_cumulant(
    params: &PhysParams,
    init: CumulantState,
    mult: &Multiplicity,
    t_span: (f64, f64),
    settings: &CumulantSettings,
) -> Result<CumulantTrajectory> {
    params.validate()?;
    let layout = init.layout;
    if layout != Layout::for_multiplicity(mult) {
        return Err(Error::InvalidParams(
            "initial state layout does not match the multiplicities".into(),
        ));
    }
    if params.detuning_offsets.as_ref().is_some_and(|d| d.len() != layout.n) {
        return Err(Error::InvalidParams("one detuning offset per tracked atom".into()));
    }
    let weights = mult.weights().to_vec();
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| rhs_into(layout, params, &weights, t, y, dy);
    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    let mut last = Vec::new();
    let mut observer = |t: f64, y: &[f64]| -> Result<()> {
        let s = CumulantState {
            layout,
            data: y.to_vec(),
        };
        records.push(CumulantRecord {
            t,
            observables: s.observables(),
            phases: s.phases(),
        });
        if settings.keep_states_from.is_some_and(|from| t >= from) {
            snapshots.push((t, s.clone()));
        }
        last = s.data;
        Ok(())
    };
    let stats = ode::integrate_with(
        OdeProblem::new(rhs, t_span, init.data, settings.sample_dt),
        Settings::from(settings.tol),
        &mut observer,
    )
    .map_err(|e| match e {
        Error::Integration(inner) => map_ode_error(layout, inner),
        other => other,
    })?;
    Ok(CumulantTrajectory {
        records,
        snapshots,
        final_state: CumulantState { layout, data: last },
        stats,
    })
}
