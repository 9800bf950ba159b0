// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Full master-equation solver for a few atoms with semiclassical motion.
//!
//! The density matrix lives on (two-level)^⊗N ⊗ Fock(n_max). Each atom's
//! position and momentum are integrated alongside it with the mean force
//! `-⟨∂H/∂x_m⟩`; momentum diffusion from spontaneous emission is neglected,
//! which limits validity to Γ small compared with the other rates.

mod lindblad;
mod space;

pub use lindblad::{force, force_components, hamiltonian, lindblad_rhs, Hamiltonian};
pub use space::{HilbertSpace, SparseOp, DEFAULT_DIM_CAP};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{AtomPhase, PhysParams};
pub use crate::observables::Observables;
use crate::ode::{self, OdeProblem, Settings, SolverStats, Tolerances};

/// Density matrix (row-major) plus atomic phase-space coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub rho: Vec<C64>,
    pub phases: Vec<AtomPhase>,
    pub t: f64,
}

impl FullState {
    /// All atoms in the ground state, cavity in vacuum.
    pub fn ground(space: &HilbertSpace, phases: Vec<AtomPhase>) -> Self {
        Self::product(space, 0, 0, phases)
    }

    /// Pure basis state with `photons` photons and atoms excited according to
    /// the bitmask `excited`.
    pub fn product(space: &HilbertSpace, excited: u32, photons: usize, phases: Vec<AtomPhase>) -> Self {
        let d = space.dim();
        let mut rho = vec![C64::new(0.0, 0.0); d * d];
        let i = space.index(photons.min(space.n_max()), excited);
        rho[i * d + i] = C64::new(1.0, 0.0);
        FullState { rho, phases, t: 0.0 }
    }
}

/// Observables of a density matrix.
pub fn observables(space: &HilbertSpace, rho: &[C64]) -> Observables {
    let d = space.dim();
    let mut n_photon = 0.0;
    let mut pops = vec![0.0; space.n_atoms()];
    for i in 0..d {
        let p = rho[i * d + i].re;
        n_photon += space.photons(i) as f64 * p;
        for (m, pop) in pops.iter_mut().enumerate() {
            if space.is_excited(i, m) {
                *pop += p;
            }
        }
    }
    let a_mean = space.annihilation().expect(rho);
    Observables::new(n_photon, a_mean, pops.iter().map(|p| 2.0 * p - 1.0).collect())
}

/// Physicality of a sampled density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    /// `|Tr ρ − 1|`.
    pub trace_error: f64,
    /// `max |ρ − ρ†|`.
    pub hermiticity: f64,
    /// Smallest eigenvalue of the Hermitian part; `None` above
    /// [`EIGEN_CHECK_DIM`], where only the diagonal is checked.
    pub min_eigenvalue: Option<f64>,
    pub min_diagonal: f64,
}

/// Largest dimension for which every sample is diagonalised.
pub const EIGEN_CHECK_DIM: usize = 256;

impl StateDiagnostics {
    pub fn of(rho: &[C64], dim: usize) -> Self {
        let mut trace = C64::new(0.0, 0.0);
        let mut hermiticity: f64 = 0.0;
        let mut min_diagonal = f64::INFINITY;
        for i in 0..dim {
            trace += rho[i * dim + i];
            min_diagonal = min_diagonal.min(rho[i * dim + i].re);
            for j in i..dim {
                hermiticity = hermiticity.max((rho[i * dim + j] - rho[j * dim + i].conj()).norm());
            }
        }
        let min_eigenvalue = (dim <= EIGEN_CHECK_DIM).then(|| min_eigenvalue(rho, dim));
        StateDiagnostics {
            trace_error: (trace - 1.0).norm(),
            hermiticity,
            min_eigenvalue,
            min_diagonal,
        }
    }

    /// The most negative population-like quantity available.
    pub fn positivity(&self) -> f64 {
        self.min_eigenvalue.unwrap_or(self.min_diagonal)
    }
}

/// Smallest eigenvalue of `(ρ + ρ†)/2`.
pub fn min_eigenvalue(rho: &[C64], dim: usize) -> f64 {
    let m = DMatrix::from_row_slice(dim, dim, rho);
    let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullRecord {
    pub t: f64,
    pub observables: Observables,
    pub phases: Vec<AtomPhase>,
    pub diagnostics: StateDiagnostics,
}

#[derive(Debug, Clone)]
pub struct FullTrajectory {
    pub records: Vec<FullRecord>,
    pub final_state: FullState,
    pub stats: SolverStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSettings {
    pub tol: Tolerances,
    pub sample_dt: f64,
    /// Abort when the positivity measure drops below `-positivity_tol`.
    pub positivity_tol: f64,
    /// Reuse one Hamiltonian for the whole run when it cannot change
    /// (single drive and pinned atoms).
    pub cache_static_hamiltonian: bool,
}

impl Default for FullSettings {
    fn default() -> Self {
        FullSettings {
            tol: Tolerances::default(),
            sample_dt: 0.1,
            positivity_tol: 1e-6,
            cache_static_hamiltonian: true,
        }
    }
}

fn pack(state: &FullState) -> Vec<f64> {
    let mut y = Vec::with_capacity(2 * state.rho.len() + 2 * state.phases.len());
    for z in &state.rho {
        y.push(z.re);
        y.push(z.im);
    }
    y.extend(state.phases.iter().map(|p| p.x));
    y.extend(state.phases.iter().map(|p| p.p));
    y
}

fn unpack_rho(y: &[f64], rho: &mut [C64]) {
    for (z, pair) in rho.iter_mut().zip(y.chunks_exact(2)) {
        *z = C64::new(pair[0], pair[1]);
    }
}

fn unpack_phases(y: &[f64], n_rho: usize, n_atoms: usize) -> Vec<AtomPhase> {
    let xs = &y[2 * n_rho..2 * n_rho + n_atoms];
    let ps = &y[2 * n_rho + n_atoms..2 * n_rho + 2 * n_atoms];
    xs.iter().zip(ps).map(|(&x, &p)| AtomPhase::new(x, p)).collect()
}

/// Integrates the master equation coupled to `dx_m/dt = 2ω_r p_m`,
/// `dp_m/dt = F_m` from `init` (at `init.t`) to `t_end`.
pub fn simulate_full(
    params: &PhysParams,
    space: &HilbertSpace,
    init: FullState,
    t_end: f64,
    settings: &FullSettings,
) -> Result<FullTrajectory> {
    params.validate()?;
    let n_atoms = space.n_atoms();
    let dim = space.dim();
    if init.phases.len() != n_atoms || init.rho.len() != dim * dim {
        return Err(Error::InvalidParams(format!(
            "initial state does not match a space of {n_atoms} atoms and dimension {dim}"
        )));
    }
    if params.n_atoms != n_atoms {
        return Err(Error::InvalidParams(format!(
            "params describe {} atoms but the space holds {n_atoms}",
            params.n_atoms
        )));
    }
    let n_rho = dim * dim;
    let damping = lindblad::damping_diagonal(space, params);
    let static_h = (settings.cache_static_hamiltonian && params.eta == 0.0 && params.omega_r == 0.0)
        .then(|| hamiltonian(space, params, &init.phases, init.t));

    let mut rho = vec![C64::new(0.0, 0.0); n_rho];
    let mut drho = vec![C64::new(0.0, 0.0); n_rho];
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        unpack_rho(y, &mut rho);
        let phases = unpack_phases(y, n_rho, n_atoms);
        let h_now;
        let h = match &static_h {
            Some(h) => h,
            None => {
                h_now = hamiltonian(space, params, &phases, t);
                &h_now
            }
        };
        lindblad::lindblad_rhs_with(space, params, h, &damping, &rho, &mut drho);
        for (pair, z) in dy[..2 * n_rho].chunks_exact_mut(2).zip(&drho) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        let f = force(space, &rho, params, &phases, t);
        for m in 0..n_atoms {
            dy[2 * n_rho + m] = 2.0 * params.omega_r * phases[m].p;
            dy[2 * n_rho + n_atoms + m] = f[m];
        }
    };

    let t0 = init.t;
    let y0 = pack(&init);
    let mut records = Vec::new();
    let mut last_y = Vec::new();
    let mut scratch = vec![C64::new(0.0, 0.0); n_rho];
    let observer = |t: f64, y: &[f64]| -> Result<()> {
        unpack_rho(y, &mut scratch);
        let diagnostics = StateDiagnostics::of(&scratch, dim);
        if diagnostics.positivity() < -settings.positivity_tol {
            return Err(Error::Positivity {
                t,
                min_eigenvalue: diagnostics.positivity(),
            });
        }
        records.push(FullRecord {
            t,
            observables: observables(space, &scratch),
            phases: unpack_phases(y, n_rho, n_atoms),
            diagnostics,
        });
        last_y.clear();
        last_y.extend_from_slice(y);
        Ok(())
    };
    let stats = ode::integrate_with(
        OdeProblem::new(rhs, (t0, t_end), y0, settings.sample_dt),
        Settings::from(settings.tol),
        observer,
    )?;
    let mut final_rho = vec![C64::new(0.0, 0.0); n_rho];
    unpack_rho(&last_y, &mut final_rho);
    let final_state = FullState {
        rho: final_rho,
        phases: unpack_phases(&last_y, n_rho, n_atoms),
        t: t_end,
    };
    Ok(FullTrajectory {
        records,
        final_state,
        stats,
    })
}

/// Atoms at `x_m = mπ` (m = 1..N) with `|p_m|` uniform in `p_range` and a
/// random sign, drawn from a ChaCha8 stream seeded with `seed`.
pub fn init_ensemble(n_atoms: usize, p_range: (f64, f64), seed: u64) -> Result<Vec<AtomPhase>> {
    let (lo, hi) = p_range;
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParams(format!("empty momentum range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((1..=n_atoms)
        .map(|m| {
            let magnitude = if lo == hi { lo } else { rng.random_range(lo..=hi) };
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            AtomPhase::new(m as f64 * std::f64::consts::PI, sign * magnitude)
        })
        .collect())
}

/// Two-time field correlation `⟨a†(t0+τ) a(t0)⟩ = Tr[a† e^{𝓛τ}(a ρ)]` with
/// the atoms frozen at `phases`, sampled every `dtau` up to `tau_end`.
pub fn two_time_g1(
    params: &PhysParams,
    space: &HilbertSpace,
    rho: &[C64],
    phases: &[AtomPhase],
    t0: f64,
    tau_end: f64,
    dtau: f64,
    tol: Tolerances,
) -> Result<Vec<C64>> {
    let dim = space.dim();
    let n_rho = dim * dim;
    let a = space.annihilation();
    let a_dag = space.creation();
    let mut x0 = vec![C64::new(0.0, 0.0); n_rho];
    for &(r, c, v) in &a.entries {
        for j in 0..dim {
            x0[r * dim + j] += v * rho[c * dim + j];
        }
    }
    let damping = lindblad::damping_diagonal(space, params);
    let static_h = (params.eta == 0.0).then(|| hamiltonian(space, params, phases, t0));
    let mut x = vec![C64::new(0.0, 0.0); n_rho];
    let mut dx = vec![C64::new(0.0, 0.0); n_rho];
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        unpack_rho(y, &mut x);
        let h_now;
        let h = match &static_h {
            Some(h) => h,
            None => {
                h_now = hamiltonian(space, params, phases, t);
                &h_now
            }
        };
        lindblad::lindblad_rhs_with(space, params, h, &damping, &x, &mut dx);
        for (pair, z) in dy.chunks_exact_mut(2).zip(&dx) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
    };
    let y0: Vec<f64> = x0.iter().flat_map(|z| [z.re, z.im]).collect();
    let mut out = Vec::new();
    let mut buf = vec![C64::new(0.0, 0.0); n_rho];
    ode::integrate_with(
        OdeProblem::new(rhs, (t0, t0 + tau_end), y0, dtau),
        Settings::from(tol),
        |_t, y| {
            unpack_rho(y, &mut buf);
            out.push(a_dag.expect(&buf));
            Ok::<(), Error>(())
        },
    )?;
    Ok(out)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn fig5_params() -> PhysParams {
        PhysParams {
            kappa: 20.0,
            gamma: 1.0,
            g: 4.0,
            omega_drive: 10.0,
            delta_a: -20.0,
            delta_c: -20.0,
            eta: 8.0,
            delta_eta: -25.0,
            omega_r: 6.0,
            n_max: 3,
            n_atoms: 1,
            detuning_offsets: None,
        }
    }

    /// `G G† / Tr(G G†)` for a Gaussian random `G`, row-major.
    pub fn random_density_matrix(dim: usize, seed: u64) -> Vec<C64> {
        use rand_distr::StandardNormal;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut normal = || -> f64 { rng.sample(StandardNormal) };
        let g = DMatrix::from_fn(dim, dim, |_, _| C64::new(normal(), normal()));
        let rho = &g * g.adjoint();
        let tr = rho.trace();
        let rho = rho / tr;
        let mut out = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                out[i * dim + j] = rho[(i, j)];
            }
        }
        out
    }
}
