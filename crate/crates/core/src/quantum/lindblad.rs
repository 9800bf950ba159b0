// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonian, Lindblad generator and semiclassical forces.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::space::{HilbertSpace, SparseOp, Term};
use crate::model::{AtomPhase, PhysParams};

/// Below this dimension the generator runs on the calling thread.
const PARALLEL_DIM: usize = 128;

/// Hamiltonian evaluated at given positions and time: a real diagonal plus
/// the values of the space's fixed off-diagonal pattern.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub(crate) diag: Vec<f64>,
    pub(crate) values: Vec<C64>,
}

impl Hamiltonian {
    pub fn to_sparse(&self, space: &HilbertSpace) -> SparseOp {
        let p = &space.pattern;
        let mut entries: Vec<(usize, usize, C64)> = self
            .diag
            .iter()
            .enumerate()
            .filter(|(_, d)| **d != 0.0)
            .map(|(i, &d)| (i, i, C64::new(d, 0.0)))
            .collect();
        for row in 0..space.dim() {
            for k in p.row_ptr[row]..p.row_ptr[row + 1] {
                if self.values[k] != C64::new(0.0, 0.0) {
                    entries.push((row, p.cols[k], self.values[k]));
                }
            }
        }
        SparseOp {
            dim: space.dim(),
            entries,
        }
    }

    /// `Tr(H ρ)`.
    pub fn expect(&self, space: &HilbertSpace, rho: &[C64]) -> C64 {
        let dim = space.dim();
        let p = &space.pattern;
        let mut acc: C64 = self
            .diag
            .iter()
            .enumerate()
            .map(|(i, &d)| d * rho[i * dim + i])
            .sum();
        for row in 0..dim {
            for k in p.row_ptr[row]..p.row_ptr[row + 1] {
                acc += self.values[k] * rho[p.cols[k] * dim + row];
            }
        }
        acc
    }
}

/// Per-atom complex weights of the Hamiltonian terms.
struct AtomWeights {
    raise: Vec<C64>,
    coupling: Vec<f64>,
}

fn atom_weights(params: &PhysParams, phases: &[AtomPhase], t: f64) -> AtomWeights {
    let drive = params.drive_amplitude(t);
    AtomWeights {
        raise: phases.iter().map(|ph| drive * ph.x.cos()).collect(),
        coupling: phases.iter().map(|ph| params.g * ph.x.sin()).collect(),
    }
}

/// `H = Σ_m [-Δ_am σ⁺_mσ⁻_m + g sin x_m (a†σ⁻_m + aσ⁺_m)
///      + cos x_m ((Ω + η e^{iΔη t}) σ⁺_m + h.c.)] - Δc a†a`.
pub fn hamiltonian(
    space: &HilbertSpace,
    params: &PhysParams,
    phases: &[AtomPhase],
    t: f64,
) -> Hamiltonian {
    assert_eq!(phases.len(), space.n_atoms(), "one phase per atom");
    let w = atom_weights(params, phases, t);
    let diag = (0..space.dim())
        .map(|i| {
            let atoms: f64 = (0..space.n_atoms())
                .filter(|&m| space.is_excited(i, m))
                .map(|m| -params.detuning(m))
                .sum();
            atoms - params.delta_c * space.photons(i) as f64
        })
        .collect();
    let p = &space.pattern;
    let values = p
        .terms
        .iter()
        .zip(&p.weights)
        .map(|(term, &bare)| match *term {
            Term::Raise(m) => w.raise[m] * bare,
            Term::Lower(m) => w.raise[m].conj() * bare,
            Term::EmitIntoCavity(m) | Term::AbsorbFromCavity(m) => C64::new(w.coupling[m] * bare, 0.0),
        })
        .collect();
    Hamiltonian { diag, values }
}

/// Damping rates `κ n + Γ Σ_m b_m` of each basis state (the diagonal of
/// `Σ L†L`).
pub(crate) fn damping_diagonal(space: &HilbertSpace, params: &PhysParams) -> Vec<f64> {
    (0..space.dim())
        .map(|i| {
            params.kappa * space.photons(i) as f64
                + params.gamma * space.excited_mask(i).count_ones() as f64
        })
        .collect()
}

/// Writes one row of the Lindblad generator applied to `rho`.
#[allow(clippy::too_many_arguments)]
#[inline]
fn generator_row(
    space: &HilbertSpace,
    params: &PhysParams,
    h: &Hamiltonian,
    damping: &[f64],
    rho: &[C64],
    r: usize,
    out: &mut [C64],
) {
    let dim = space.dim();
    let p = &space.pattern;
    let rho_row = &rho[r * dim..(r + 1) * dim];
    let minus_i = C64::new(0.0, -1.0);

    // diagonal Hamiltonian and anticommutator with Σ L†L
    let hr = h.diag[r];
    let dr = damping[r];
    for c in 0..dim {
        let coeff = C64::new(-0.5 * (dr + damping[c]), -(hr - h.diag[c]));
        out[c] = coeff * rho_row[c];
    }

    // -i (H ρ)[r, :]
    for k in p.row_ptr[r]..p.row_ptr[r + 1] {
        let v = minus_i * h.values[k];
        let src = &rho[p.cols[k] * dim..(p.cols[k] + 1) * dim];
        for (o, s) in out.iter_mut().zip(src) {
            *o += v * s;
        }
    }
    // +i (ρ H)[r, :]: ρ[r, k] H[k, c]
    for kr in 0..dim {
        let x = rho_row[kr];
        if x == C64::new(0.0, 0.0) {
            continue;
        }
        let x = C64::new(0.0, 1.0) * x;
        for k in p.row_ptr[kr]..p.row_ptr[kr + 1] {
            out[p.cols[k]] += x * h.values[k];
        }
    }

    // jumps: κ a ρ a† and Γ σ⁻_m ρ σ⁺_m
    if let Some((src_r, wr)) = space.annihilation_source(r) {
        let src = &rho[src_r * dim..(src_r + 1) * dim];
        for c in 0..dim {
            if let Some((src_c, wc)) = space.annihilation_source(c) {
                out[c] += (params.kappa * wr * wc) * src[src_c];
            }
        }
    }
    for m in 0..space.n_atoms() {
        if let Some(src_r) = space.lowering_source(r, m) {
            let src = &rho[src_r * dim..(src_r + 1) * dim];
            for c in 0..dim {
                if let Some(src_c) = space.lowering_source(c, m) {
                    out[c] += params.gamma * src[src_c];
                }
            }
        }
    }
}

/// `dρ/dt = -i[H, ρ] + κ D[a]ρ + Γ Σ_m D[σ⁻_m]ρ` for row-major `ρ`.
///
/// Works for any operator in place of `ρ` (Hermiticity is not assumed), so
/// the same generator propagates two-time correlations.
pub fn lindblad_rhs(
    space: &HilbertSpace,
    params: &PhysParams,
    h: &Hamiltonian,
    rho: &[C64],
    out: &mut [C64],
) {
    let damping = damping_diagonal(space, params);
    lindblad_rhs_with(space, params, h, &damping, rho, out);
}

pub(crate) fn lindblad_rhs_with(
    space: &HilbertSpace,
    params: &PhysParams,
    h: &Hamiltonian,
    damping: &[f64],
    rho: &[C64],
    out: &mut [C64],
) {
    let dim = space.dim();
    debug_assert_eq!(rho.len(), dim * dim);
    debug_assert_eq!(out.len(), dim * dim);
    if dim >= PARALLEL_DIM {
        out.par_chunks_mut(dim)
            .enumerate()
            .for_each(|(r, row)| generator_row(space, params, h, damping, rho, r, row));
    } else {
        for (r, row) in out.chunks_mut(dim).enumerate() {
            generator_row(space, params, h, damping, rho, r, row);
        }
    }
}

/// Expectations `⟨σ⁺_m⟩` and `⟨a†σ⁻_m⟩` for every atom, read off the
/// Hamiltonian pattern.
pub(crate) fn atom_coherences(space: &HilbertSpace, rho: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let dim = space.dim();
    let p = &space.pattern;
    let mut raise = vec![C64::new(0.0, 0.0); space.n_atoms()];
    let mut emit = vec![C64::new(0.0, 0.0); space.n_atoms()];
    for row in 0..dim {
        for k in p.row_ptr[row]..p.row_ptr[row + 1] {
            let x = p.weights[k] * rho[p.cols[k] * dim + row];
            match p.terms[k] {
                Term::Raise(m) => raise[m] += x,
                Term::EmitIntoCavity(m) => emit[m] += x,
                _ => {}
            }
        }
    }
    (raise, emit)
}

/// Complex form of `-⟨∂H/∂x_m⟩` per atom, computed without assuming `ρ` is
/// Hermitian. For a physical state the imaginary parts vanish.
pub fn force_components(
    space: &HilbertSpace,
    rho: &[C64],
    params: &PhysParams,
    phases: &[AtomPhase],
    t: f64,
) -> Vec<C64> {
    let dim = space.dim();
    let p = &space.pattern;
    let drive = params.drive_amplitude(t);
    // ⟨σ⁺⟩, ⟨σ⁻⟩, ⟨a†σ⁻⟩, ⟨aσ⁺⟩
    let zero = C64::new(0.0, 0.0);
    let mut acc = vec![[zero; 4]; space.n_atoms()];
    for row in 0..dim {
        for k in p.row_ptr[row]..p.row_ptr[row + 1] {
            let x = p.weights[k] * rho[p.cols[k] * dim + row];
            match p.terms[k] {
                Term::Raise(m) => acc[m][0] += x,
                Term::Lower(m) => acc[m][1] += x,
                Term::EmitIntoCavity(m) => acc[m][2] += x,
                Term::AbsorbFromCavity(m) => acc[m][3] += x,
            }
        }
    }
    phases
        .iter()
        .zip(&acc)
        .map(|(ph, e)| {
            let (s, c) = ph.x.sin_cos();
            -params.g * c * (e[2] + e[3]) + s * (drive * e[0] + drive.conj() * e[1])
        })
        .collect()
}

/// Semiclassical force `F_m = -⟨∂H/∂x_m⟩` in units of ħkΓ:
/// `-2g cos x_m Re⟨a†σ⁻_m⟩ + 2 sin x_m Re[(Ω + η e^{iΔη t})⟨σ⁺_m⟩]`.
pub fn force(
    space: &HilbertSpace,
    rho: &[C64],
    params: &PhysParams,
    phases: &[AtomPhase],
    t: f64,
) -> Vec<f64> {
    let (raise, emit) = atom_coherences(space, rho);
    let drive = params.drive_amplitude(t);
    phases
        .iter()
        .enumerate()
        .map(|(m, ph)| {
            let (s, c) = ph.x.sin_cos();
            -2.0 * params.g * c * emit[m].re + 2.0 * s * (drive * raise[m]).re
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::test_support::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn dense_rhs(space: &HilbertSpace, params: &PhysParams, h: &Hamiltonian, rho: &[C64]) -> DMatrix<C64> {
        let mut out = vec![C64::new(0.0, 0.0); rho.len()];
        lindblad_rhs(space, params, h, rho, &mut out);
        DMatrix::from_row_slice(space.dim(), space.dim(), &out)
    }

    /// Direct dense evaluation of the generator.
    fn reference_rhs(space: &HilbertSpace, params: &PhysParams, h: &Hamiltonian, rho: &[C64]) -> DMatrix<C64> {
        let d = space.dim();
        let r = DMatrix::from_row_slice(d, d, rho);
        let hm = h.to_sparse(space).to_dense();
        let i = C64::new(0.0, 1.0);
        let mut out = (&hm * &r - &r * &hm) * -i;
        let mut jumps = vec![(params.kappa, space.annihilation().to_dense())];
        for m in 0..space.n_atoms() {
            jumps.push((params.gamma, space.lowering(m).to_dense()));
        }
        for (rate, l) in jumps {
            let ld = l.adjoint();
            let ldl = &ld * &l;
            out += (&l * &r * &ld - (&ldl * &r + &r * &ldl) * C64::new(0.5, 0.0)) * C64::new(rate, 0.0);
        }
        out
    }

    #[test]
    fn reduces_to_single_atom_drive() {
        let space = HilbertSpace::new(1, 1).unwrap();
        let params = PhysParams { g: 0.0, eta: 0.0, ..fig5_params() };
        let h = hamiltonian(&space, &params, &[AtomPhase::new(0.0, 0.0)], 0.0).to_sparse(&space).to_dense();
        let g0 = space.index(0, 0);
        let e0 = space.index(0, 1);
        assert_abs_diff_eq!(h[(e0, e0)].re, -params.delta_a);
        assert_abs_diff_eq!(h[(g0, g0)].re, 0.0);
        assert_abs_diff_eq!(h[(e0, g0)].re, params.omega_drive);
        assert_abs_diff_eq!(h[(g0, e0)].re, params.omega_drive);
    }

    #[test]
    fn cavity_coupling_vanishes_at_sine_node() {
        let space = HilbertSpace::new(1, 2).unwrap();
        let params = fig5_params();
        let h = hamiltonian(&space, &params, &[AtomPhase::new(0.0, 0.0)], 0.3).to_sparse(&space).to_dense();
        // |g,1⟩ ↔ |e,0⟩ element
        assert_abs_diff_eq!(h[(space.index(1, 0), space.index(0, 1))].norm(), 0.0);
    }

    #[test]
    fn bichromatic_amplitude_at_t0() {
        let space = HilbertSpace::new(1, 1).unwrap();
        let h = hamiltonian(&space, &fig5_params(), &[AtomPhase::new(0.0, 0.0)], 0.0).to_sparse(&space).to_dense();
        let v = h[(space.index(0, 1), space.index(0, 0))];
        assert_abs_diff_eq!(v.re, 18.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let space = HilbertSpace::new(3, 2).unwrap();
        let phases = [AtomPhase::new(0.3, 0.0), AtomPhase::new(1.7, 0.0), AtomPhase::new(-2.2, 0.0)];
        let h = hamiltonian(&space, &fig5_params(), &phases, 0.77).to_sparse(&space).to_dense();
        assert!((h.adjoint() - &h).iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn matches_dense_generator() {
        for (n_atoms, n_max, seed) in [(1, 2, 1u64), (2, 2, 2), (3, 1, 3), (3, 2, 4)] {
            let space = HilbertSpace::new(n_atoms, n_max).unwrap();
            let params = PhysParams { n_atoms, n_max, ..fig5_params() };
            let phases: Vec<_> = (0..n_atoms).map(|m| AtomPhase::new(0.4 + 1.3 * m as f64, 0.0)).collect();
            let h = hamiltonian(&space, &params, &phases, 0.37);
            let rho = random_density_matrix(space.dim(), seed);
            let a = dense_rhs(&space, &params, &h, &rho);
            let b = reference_rhs(&space, &params, &h, &rho);
            let diff = (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(diff < 1e-11, "n_atoms {n_atoms}: {diff}");
        }
    }

    #[test]
    fn bare_decay_rates() {
        let params = PhysParams { g: 0.0, omega_drive: 0.0, eta: 0.0, ..fig5_params() };
        let space = HilbertSpace::new(1, 2).unwrap();
        let h = hamiltonian(&space, &params, &[AtomPhase::new(0.0, 0.0)], 0.0);
        let d = space.dim();

        let mut rho = vec![C64::new(0.0, 0.0); d * d];
        let e = space.index(0, 1);
        rho[e * d + e] = C64::new(1.0, 0.0);
        let drho = dense_rhs(&space, &params, &h, &rho);
        let pop_rate: C64 = space.excited_projector(0).expect(drho.transpose().as_slice());
        assert_abs_diff_eq!(pop_rate.re, -params.gamma, epsilon = 1e-14);

        let mut rho = vec![C64::new(0.0, 0.0); d * d];
        let one = space.index(1, 0);
        rho[one * d + one] = C64::new(1.0, 0.0);
        let drho = dense_rhs(&space, &params, &h, &rho);
        let n_rate = space.number().expect(drho.transpose().as_slice());
        assert_abs_diff_eq!(n_rate.re, -params.kappa, epsilon = 1e-12);
    }

    #[test]
    fn trace_preserving() {
        let space = HilbertSpace::new(2, 3).unwrap();
        let params = PhysParams { n_atoms: 2, ..fig5_params() };
        let phases = [AtomPhase::new(0.9, 0.0), AtomPhase::new(2.1, 0.0)];
        for seed in 0..10 {
            let h = hamiltonian(&space, &params, &phases, seed as f64 * 0.1);
            let rho = random_density_matrix(space.dim(), seed);
            let drho = dense_rhs(&space, &params, &h, &rho);
            assert!(drho.trace().norm() < 1e-12);
        }
    }

    #[test]
    fn force_without_coherences_is_zero() {
        let space = HilbertSpace::new(1, 2).unwrap();
        let d = space.dim();
        let mut rho = vec![C64::new(0.0, 0.0); d * d];
        rho[0] = C64::new(0.6, 0.0);
        let e = space.index(1, 1);
        rho[e * d + e] = C64::new(0.4, 0.0);
        let f = force(&space, &rho, &fig5_params(), &[AtomPhase::new(0.7, 0.0)], 0.2);
        assert_eq!(f, vec![0.0]);
    }

    #[test]
    fn force_at_antinode_is_cavity_term_only() {
        let space = HilbertSpace::new(1, 2).unwrap();
        let params = fig5_params();
        let rho = random_density_matrix(space.dim(), 11);
        let f = force(&space, &rho, &params, &[AtomPhase::new(0.0, 0.0)], 0.4)[0];
        let emit = space.creation().to_dense() * space.lowering(0).to_dense();
        let emit = SparseOp {
            dim: space.dim(),
            entries: (0..space.dim())
                .flat_map(|r| (0..space.dim()).map(move |c| (r, c)))
                .filter(|&(r, c)| emit[(r, c)].norm() > 0.0)
                .map(|(r, c)| (r, c, emit[(r, c)]))
                .collect(),
        };
        assert_abs_diff_eq!(f, -2.0 * params.g * emit.expect(&rho).re, epsilon = 1e-12);
    }
}
