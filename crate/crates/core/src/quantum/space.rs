// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Tensor-product space (two-level)^⊗N ⊗ Fock(n_max) and its ladder
//! operators.
//!
//! Basis index `i = n + (n_max + 1)·b`, where `n` is the photon number and
//! bit `m` of `b` is set when atom `m` is excited. Every ladder operator used
//! by the model maps a basis state onto at most one other basis state, so the
//! operators are stored as per-column maps rather than general sparse
//! matrices.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default cap on the Hilbert-space dimension.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// A general sparse matrix as `(row, col, value)` triplets. Used for
/// inspection and tests; the integrator works on [`HamiltonianPattern`].
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    pub dim: usize,
    pub entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    pub fn adjoint(&self) -> SparseOp {
        SparseOp {
            dim: self.dim,
            entries: self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())).collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// `Tr(O ρ)` for a row-major `ρ`.
    pub fn expect(&self, rho: &[C64]) -> C64 {
        self.entries
            .iter()
            .map(|&(r, c, v)| v * rho[c * self.dim + r])
            .sum()
    }
}

/// Where a Hamiltonian matrix element comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Term {
    /// `σ⁺_m`, weight `cos x_m (Ω + η e^{iΔη t})`.
    Raise(usize),
    /// `σ⁻_m`, the conjugate weight.
    Lower(usize),
    /// `a†σ⁻_m`, weight `g sin x_m`.
    EmitIntoCavity(usize),
    /// `aσ⁺_m`, weight `g sin x_m`.
    AbsorbFromCavity(usize),
}

/// Fixed CSR sparsity pattern of the off-diagonal Hamiltonian; the values
/// depend on positions and time and are filled per evaluation.
#[derive(Debug, Clone)]
pub(crate) struct HamiltonianPattern {
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub terms: Vec<Term>,
    /// Matrix element of the bare operator (e.g. `sqrt(n+1)`).
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct HilbertSpace {
    n_atoms: usize,
    n_max: usize,
    dim: usize,
    /// Photon number of each basis state.
    photons: Vec<usize>,
    /// Excited-atom bitmask of each basis state.
    atoms: Vec<u32>,
    pub(crate) pattern: HamiltonianPattern,
}

impl HilbertSpace {
    pub fn new(n_atoms: usize, n_max: usize) -> Result<Self> {
        Self::with_cap(n_atoms, n_max, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(n_atoms: usize, n_max: usize, cap: usize) -> Result<Self> {
        if n_atoms == 0 || n_max == 0 {
            return Err(Error::InvalidParams(
                "the space needs at least one atom and n_max >= 1".into(),
            ));
        }
        let dim = if n_atoms >= 31 {
            usize::MAX
        } else {
            (n_max + 1).saturating_mul(1usize << n_atoms)
        };
        if dim > cap {
            return Err(Error::DimensionBudget { dim, cap });
        }
        let nf = n_max + 1;
        let photons = (0..dim).map(|i| i % nf).collect();
        let atoms = (0..dim).map(|i| (i / nf) as u32).collect();
        let mut space = HilbertSpace {
            n_atoms,
            n_max,
            dim,
            photons,
            atoms,
            pattern: HamiltonianPattern {
                row_ptr: Vec::new(),
                cols: Vec::new(),
                terms: Vec::new(),
                weights: Vec::new(),
            },
        };
        space.pattern = space.build_pattern();
        Ok(space)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn index(&self, photons: usize, excited: u32) -> usize {
        photons + (self.n_max + 1) * excited as usize
    }

    #[inline]
    pub fn photons(&self, i: usize) -> usize {
        self.photons[i]
    }

    #[inline]
    pub fn excited_mask(&self, i: usize) -> u32 {
        self.atoms[i]
    }

    #[inline]
    pub fn is_excited(&self, i: usize, m: usize) -> bool {
        self.atoms[i] >> m & 1 == 1
    }

    /// Source state and matrix element of `a` landing on `row`:
    /// `a |n+1⟩ = sqrt(n+1) |n⟩`.
    #[inline]
    pub(crate) fn annihilation_source(&self, row: usize) -> Option<(usize, f64)> {
        let n = self.photons[row];
        (n < self.n_max).then(|| (row + 1, ((n + 1) as f64).sqrt()))
    }

    /// Source state of `σ⁻_m` landing on `row` (matrix element 1).
    #[inline]
    pub(crate) fn lowering_source(&self, row: usize, m: usize) -> Option<usize> {
        (!self.is_excited(row, m)).then(|| row + (self.n_max + 1) * (1usize << m))
    }

    fn build_pattern(&self) -> HamiltonianPattern {
        let nf = self.n_max + 1;
        let mut row_ptr = Vec::with_capacity(self.dim + 1);
        let mut cols = Vec::new();
        let mut terms = Vec::new();
        let mut weights = Vec::new();
        row_ptr.push(0);
        for row in 0..self.dim {
            let n = self.photons[row];
            let mut entries: Vec<(usize, Term, f64)> = Vec::new();
            for m in 0..self.n_atoms {
                let bit = nf * (1usize << m);
                if self.is_excited(row, m) {
                    // σ⁺_m maps col (bit clear) to row (bit set)
                    entries.push((row - bit, Term::Raise(m), 1.0));
                    // aσ⁺_m: col has one more photon
                    if n < self.n_max {
                        entries.push((row - bit + 1, Term::AbsorbFromCavity(m), ((n + 1) as f64).sqrt()));
                    }
                } else {
                    entries.push((row + bit, Term::Lower(m), 1.0));
                    // a†σ⁻_m: col has one photon less and atom m excited
                    if n > 0 {
                        entries.push((row + bit - 1, Term::EmitIntoCavity(m), (n as f64).sqrt()));
                    }
                }
            }
            entries.sort_by_key(|e| e.0);
            for (c, term, w) in entries {
                cols.push(c);
                terms.push(term);
                weights.push(w);
            }
            row_ptr.push(cols.len());
        }
        HamiltonianPattern {
            row_ptr,
            cols,
            terms,
            weights,
        }
    }

    /// Cavity annihilation operator `a`.
    pub fn annihilation(&self) -> SparseOp {
        let entries = (0..self.dim)
            .filter_map(|r| self.annihilation_source(r).map(|(c, w)| (r, c, C64::new(w, 0.0))))
            .collect();
        SparseOp {
            dim: self.dim,
            entries,
        }
    }

    pub fn creation(&self) -> SparseOp {
        self.annihilation().adjoint()
    }

    /// `σ⁻_m`.
    pub fn lowering(&self, m: usize) -> SparseOp {
        assert!(m < self.n_atoms, "atom index {m} out of range");
        let entries = (0..self.dim)
            .filter_map(|r| self.lowering_source(r, m).map(|c| (r, c, C64::new(1.0, 0.0))))
            .collect();
        SparseOp {
            dim: self.dim,
            entries,
        }
    }

    /// `σ⁺_m`.
    pub fn raising(&self, m: usize) -> SparseOp {
        self.lowering(m).adjoint()
    }

    /// `σ⁺_m σ⁻_m`.
    pub fn excited_projector(&self, m: usize) -> SparseOp {
        let entries = (0..self.dim)
            .filter(|&i| self.is_excited(i, m))
            .map(|i| (i, i, C64::new(1.0, 0.0)))
            .collect();
        SparseOp {
            dim: self.dim,
            entries,
        }
    }

    /// `a†a`.
    pub fn number(&self) -> SparseOp {
        let entries = (0..self.dim)
            .filter(|&i| self.photons[i] > 0)
            .map(|i| (i, i, C64::new(self.photons[i] as f64, 0.0)))
            .collect();
        SparseOp {
            dim: self.dim,
            entries,
        }
    }
}
