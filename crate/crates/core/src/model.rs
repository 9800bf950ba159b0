// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Physical parameters and the analytic dressed-state layer.
//!
//! A two-level atom driven by a standing wave `Ω(x) = Ω cos x` in the frame
//! rotating with the drive has the Hamiltonian
//!
//! ```text
//! H_a = -Δa σ⁺σ⁻ + Ω(x) (σ⁺ + σ⁻)
//! ```
//!
//! whose eigenvalues `E± = -Δa/2 ± sqrt(Ω(x)² + Δa²/4)` are the position
//! dependent light-shifted (dressed) levels. The gradient of `E±` is the
//! dipole force, equal and opposite on the two dressed states.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model parameters. Every rate and detuning is in units of Γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysParams {
    /// Cavity field decay rate κ.
    pub kappa: f64,
    /// Spontaneous emission rate. Γ is the unit of the model, so any value
    /// other than 1 is rejected by [`PhysParams::validate`].
    #[serde(default = "unit_gamma")]
    pub gamma: f64,
    /// Atom-cavity coupling `g`; the mode function is `g sin x`.
    pub g: f64,
    /// Rabi amplitude Ω of the light-shifting drive.
    pub omega_drive: f64,
    /// Δa = ω_Ω − ω_a.
    pub delta_a: f64,
    /// Δc = ω_Ω − ω_c.
    pub delta_c: f64,
    /// Rabi amplitude η of the second (pumping) drive.
    #[serde(default)]
    pub eta: f64,
    /// Δη = ω_Ω − ω_η.
    #[serde(default)]
    pub delta_eta: f64,
    /// Recoil frequency ω_r = ħk²/(2mΓ).
    pub omega_r: f64,
    /// Fock-space cutoff (largest photon number kept).
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Number of tracked atoms.
    #[serde(default = "one")]
    pub n_atoms: usize,
    /// Per-atom drive-atom detunings; `None` means `delta_a` for every atom.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning_offsets: Option<Vec<f64>>,
}

fn unit_gamma() -> f64 {
    1.0
}

fn default_n_max() -> usize {
    3
}

fn one() -> usize {
    1
}

impl PhysParams {
    /// Detuning Δ_am of atom `m`.
    #[inline]
    pub fn detuning(&self, m: usize) -> f64 {
        match &self.detuning_offsets {
            Some(d) => d[m],
            None => self.delta_a,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("g", self.g),
            ("omega_drive", self.omega_drive),
            ("delta_a", self.delta_a),
            ("delta_c", self.delta_c),
            ("eta", self.eta),
            ("delta_eta", self.delta_eta),
            ("omega_r", self.omega_r),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        if self.gamma != 1.0 {
            return Err(Error::InvalidParams(format!(
                "gamma is the unit of frequency and must equal 1, got {}",
                self.gamma
            )));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParams(format!("kappa must be > 0, got {}", self.kappa)));
        }
        // ω_r = 0 pins the atoms; used for the stationary Bloch limit.
        if self.omega_r < 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega_r must be >= 0, got {}",
                self.omega_r
            )));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParams("n_max must be >= 1".into()));
        }
        if self.n_atoms < 1 {
            return Err(Error::InvalidParams("n_atoms must be >= 1".into()));
        }
        if let Some(d) = &self.detuning_offsets {
            if d.len() != self.n_atoms {
                return Err(Error::InvalidParams(format!(
                    "detuning_offsets has {} entries for {} atoms",
                    d.len(),
                    self.n_atoms
                )));
            }
            if let Some(bad) = d.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidParams(format!("non-finite detuning offset {bad}")));
            }
        }
        Ok(())
    }

    /// Complex amplitude multiplying `σ⁺ cos x` at time `t`:
    /// `Ω + η e^{iΔη t}`. The `σ⁻` term carries its conjugate.
    #[inline]
    pub fn drive_amplitude(&self, t: f64) -> num_complex::Complex64 {
        let (s, c) = (self.delta_eta * t).sin_cos();
        num_complex::Complex64::new(self.omega_drive + self.eta * c, self.eta * s)
    }
}

/// Semiclassical coordinates of one atom: position phase `k x` (unwrapped)
/// and momentum in units of `ħk`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomPhase {
    pub x: f64,
    pub p: f64,
}

impl AtomPhase {
    pub fn new(x: f64, p: f64) -> Self {
        AtomPhase { x, p }
    }

    /// Kinetic energy `ω_r p²` in units of ħΓ.
    pub fn kinetic_energy(&self, omega_r: f64) -> f64 {
        omega_r * self.p * self.p
    }
}

/// Dressed-state data at one position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedPoint {
    pub x: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    /// Mixing angle Θ.
    pub theta: f64,
    /// Force on `|+⟩` in units of ħkΓ.
    pub f_plus: f64,
    /// Force on `|−⟩` in units of ħkΓ.
    pub f_minus: f64,
}

/// Eigenvalues `(E₊, E₋)` of `-Δa σ⁺σ⁻ + Ω (σ⁺ + σ⁻)`.
pub fn dressed_eigenvalues(omega: f64, delta_a: f64) -> (f64, f64) {
    let root = omega.hypot(0.5 * delta_a);
    let mid = -0.5 * delta_a;
    (mid + root, mid - root)
}

/// Mixing angle Θ with `tan Θ = -2Ω/Δa`.
///
/// Θ = 0 means `|+⟩ = |e⟩`. The angle is taken from `|Ω|` so it lies in
/// `[0, π]`; the sign of Ω enters the dressed vectors instead (see
/// [`dressed_states`]). Θ = π only for Ω = 0 with a blue detuning, where
/// `|+⟩ = |g⟩`.
pub fn mixing_angle(omega: f64, delta_a: f64) -> Result<f64> {
    if omega == 0.0 && delta_a == 0.0 {
        return Err(Error::DegenerateDressedBasis);
    }
    Ok((2.0 * omega.abs()).atan2(-delta_a))
}

/// Dressed vectors as `[c_e, c_g]` amplitudes:
/// `|+⟩ = cos(Θ/2)|e⟩ + s sin(Θ/2)|g⟩`, `|−⟩ = -s sin(Θ/2)|e⟩ + cos(Θ/2)|g⟩`
/// with `s = sign(Ω)`.
pub fn dressed_states(omega: f64, delta_a: f64) -> Result<([f64; 2], [f64; 2])> {
    let theta = mixing_angle(omega, delta_a)?;
    let s = if omega < 0.0 { -1.0 } else { 1.0 };
    let (sh, ch) = (0.5 * theta).sin_cos();
    Ok(([ch, s * sh], [-s * sh, ch]))
}

/// Dressed levels, mixing angle and dipole forces for a standing-wave drive
/// of amplitude `amplitude` (i.e. `Ω(x) = amplitude · cos x`).
pub fn dressed_point(amplitude: f64, delta_a: f64, x: f64) -> DressedPoint {
    let (s, c) = x.sin_cos();
    let local = amplitude * c;
    let (e_plus, e_minus) = dressed_eigenvalues(local, delta_a);
    let root = local.hypot(0.5 * delta_a);
    // -dE±/dx = ±Ω² sin(2x) / (2 sqrt(Ω² cos² x + Δa²/4))
    let f = if root > 0.0 {
        amplitude * amplitude * (2.0 * s * c) / (2.0 * root)
    } else {
        0.0
    };
    // Along Δa = 0 the angle is π/2 everywhere except at the node itself;
    // use that limit there.
    let theta = mixing_angle(local, delta_a).unwrap_or(0.5 * PI);
    DressedPoint {
        x,
        e_plus,
        e_minus,
        theta,
        f_plus: f,
        f_minus: -f,
    }
}

/// Evaluates [`dressed_point`] for the first drive `Ω cos x` at each position.
pub fn light_shift_profile(params: &PhysParams, xs: &[f64]) -> Vec<DressedPoint> {
    xs.iter()
        .map(|&x| dressed_point(params.omega_drive, params.delta_a, x))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition {
    pub holds: bool,
    pub margin: f64,
}

impl Condition {
    fn from_margin(margin: f64) -> Self {
        Condition {
            holds: margin > 0.0,
            margin,
        }
    }
}

/// The three operating conditions for narrow-band lasing near the bare
/// atomic line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    /// κ > Γ; margin κ − Γ.
    pub bad_cavity: Condition,
    /// Δa < 0 and |Δa| > Ω; margin |Δa| − Ω (forced non-positive when Δa ≥ 0).
    pub far_red_detuned: Condition,
    /// 2 sqrt(Ω² + Δa²/4) > κ; margin is the difference.
    pub light_shift_exceeds_linewidth: Condition,
}

impl RegimeReport {
    pub fn all_hold(&self) -> bool {
        self.bad_cavity.holds
            && self.far_red_detuned.holds
            && self.light_shift_exceeds_linewidth.holds
    }
}

pub fn regime_check(params: &PhysParams) -> RegimeReport {
    let red_margin = params.delta_a.abs() - params.omega_drive.abs();
    let far_red_detuned = if params.delta_a < 0.0 {
        Condition::from_margin(red_margin)
    } else {
        Condition {
            holds: false,
            margin: red_margin.min(0.0),
        }
    };
    let (e_plus, e_minus) = dressed_eigenvalues(params.omega_drive, params.delta_a);
    RegimeReport {
        bad_cavity: Condition::from_margin(params.kappa - params.gamma),
        far_red_detuned,
        light_shift_exceeds_linewidth: Condition::from_margin(e_plus - e_minus - params.kappa),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn fig5() -> PhysParams {
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

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(dressed_eigenvalues(0.0, -20.0), (20.0, 0.0));
        let (ep, em) = dressed_eigenvalues(10.0, -20.0);
        assert_abs_diff_eq!(ep, 10.0 + 200f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(ep, 24.142_135_623_730_95, epsilon = 1e-12);
        assert_abs_diff_eq!(em, -4.142_135_623_730_95, epsilon = 1e-12);
        assert_eq!(dressed_eigenvalues(10.0, 0.0), (10.0, -10.0));
    }

    #[test]
    fn mixing_angle_examples() {
        assert_abs_diff_eq!(mixing_angle(10.0, -20.0).unwrap(), PI / 4.0, epsilon = 1e-15);
        assert_eq!(mixing_angle(0.0, -20.0).unwrap(), 0.0);
        assert_abs_diff_eq!(mixing_angle(5.0, 0.0).unwrap(), PI / 2.0, epsilon = 1e-15);
        assert!(matches!(mixing_angle(0.0, 0.0), Err(Error::DegenerateDressedBasis)));
    }

    #[test]
    fn profile_at_node_and_antinode() {
        let p = fig5();
        let pts = light_shift_profile(&p, &[PI / 2.0, 0.0]);
        assert_abs_diff_eq!(pts[0].e_plus, (-p.delta_a).max(0.0), epsilon = 1e-12);
        assert_abs_diff_eq!(pts[0].f_plus, 0.0, epsilon = 1e-12);
        assert_eq!(pts[1].f_plus, 0.0);
        // maximal splitting at the antinode
        assert_abs_diff_eq!(pts[1].e_plus - pts[1].e_minus, 2.0 * 200f64.sqrt(), epsilon = 1e-12);
        assert!(pts[1].e_plus - pts[1].e_minus > p.kappa);
    }

    #[test]
    fn regime_examples() {
        let r = regime_check(&fig5());
        assert!(r.all_hold());
        assert_abs_diff_eq!(r.bad_cavity.margin, 19.0);
        assert_abs_diff_eq!(r.far_red_detuned.margin, 10.0);
        assert_abs_diff_eq!(r.light_shift_exceeds_linewidth.margin, 8.284_271_247_461_9, epsilon = 1e-12);

        let fig2 = PhysParams { omega_drive: 30.0, delta_a: -10.0, ..fig5() };
        assert!(!regime_check(&fig2).far_red_detuned.holds);

        let good_cavity = PhysParams { kappa: 0.5, ..fig5() };
        let r = regime_check(&good_cavity);
        assert!(!r.bad_cavity.holds);
        assert!(r.far_red_detuned.holds);

        let blue = PhysParams { delta_a: 20.0, ..fig5() };
        assert!(!regime_check(&blue).far_red_detuned.holds);
    }

    #[test]
    fn validation() {
        assert!(fig5().validate().is_ok());
        assert!(PhysParams { gamma: 2.0, ..fig5() }.validate().is_err());
        assert!(PhysParams { kappa: 0.0, ..fig5() }.validate().is_err());
        assert!(PhysParams { n_max: 0, ..fig5() }.validate().is_err());
        assert!(PhysParams { g: f64::NAN, ..fig5() }.validate().is_err());
        assert!(PhysParams { detuning_offsets: Some(vec![1.0, 2.0]), ..fig5() }
            .validate()
            .is_err());
        assert_eq!(
            PhysParams { detuning_offsets: Some(vec![-3.0]), ..fig5() }.detuning(0),
            -3.0
        );
    }

    /// 2x2 Hamiltonian in the (e, g) basis.
    fn h2(omega: f64, delta_a: f64) -> [[f64; 2]; 2] {
        [[-delta_a, omega], [omega, 0.0]]
    }

    proptest! {
        #[test]
        fn eigen_identities(omega in -50.0..50.0f64, delta_a in -50.0..50.0f64) {
            let (ep, em) = dressed_eigenvalues(omega, delta_a);
            prop_assert!(ep >= em);
            prop_assert!((ep + em + delta_a).abs() < 1e-12);
            prop_assert!((ep - em - 2.0 * (omega * omega + delta_a * delta_a / 4.0).sqrt()).abs() < 1e-11);
        }

        #[test]
        fn dressed_rotation_diagonalizes(omega in -50.0..50.0f64, delta_a in -50.0..50.0f64) {
            prop_assume!(omega.abs() > 1e-6 || delta_a.abs() > 1e-6);
            let (plus, minus) = dressed_states(omega, delta_a).unwrap();
            let h = h2(omega, delta_a);
            let (ep, em) = dressed_eigenvalues(omega, delta_a);
            let apply = |v: [f64; 2]| [h[0][0] * v[0] + h[0][1] * v[1], h[1][0] * v[0] + h[1][1] * v[1]];
            let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
            let scale = 1.0 + omega.abs() + delta_a.abs();
            prop_assert!((dot(plus, apply(plus)) - ep).abs() < 1e-12 * scale);
            prop_assert!((dot(minus, apply(minus)) - em).abs() < 1e-12 * scale);
            prop_assert!(dot(plus, apply(minus)).abs() < 1e-12 * scale);
            let theta = mixing_angle(omega, delta_a).unwrap();
            prop_assert!((0.0..=PI).contains(&theta));
        }

        #[test]
        fn force_antisymmetry_and_periodicity(x in -20.0..20.0f64, amp in 0.0..40.0f64, delta_a in -40.0..-0.5f64) {
            let a = dressed_point(amp, delta_a, x);
            prop_assert_eq!(a.f_plus, -a.f_minus);
            let b = dressed_point(amp, delta_a, x + PI);
            prop_assert!((a.e_plus - b.e_plus).abs() < 1e-10);
            prop_assert!((a.f_plus - b.f_plus).abs() < 1e-9);
        }

        #[test]
        fn analytic_force_matches_finite_difference(x in -10.0..10.0f64, amp in 1.0..40.0f64, delta_a in -40.0..-0.5f64) {
            let h = 1e-5;
            let hi = dressed_point(amp, delta_a, x + h);
            let lo = dressed_point(amp, delta_a, x - h);
            let fd_plus = -(hi.e_plus - lo.e_plus) / (2.0 * h);
            let fd_minus = -(hi.e_minus - lo.e_minus) / (2.0 * h);
            let p = dressed_point(amp, delta_a, x);
            // relative to the force scale so zero crossings do not blow up the ratio
            let scale = amp * amp / delta_a.abs();
            prop_assert!((fd_plus - p.f_plus).abs() < 1e-6 * scale.max(p.f_plus.abs()));
            prop_assert!((fd_minus - p.f_minus).abs() < 1e-6 * scale.max(p.f_minus.abs()));
        }
    }
}
