// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Cavity output spectrum.
//!
//! The first-order correlation `g¹(τ) = ⟨a†(t0+τ) a(t0)⟩` is propagated with
//! the regression equations of the cumulant model, averaged over several
//! late-time anchors and transformed with
//! `S(ω) = 2 Re ∫₀^∞ e^{−iωτ} g¹(τ) dτ`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::cumulant::{self, CumulantState, Layout, Multiplicity};
use crate::error::{Error, Result};
use crate::model::PhysParams;
use crate::ode::{self, OdeProblem, Settings, Tolerances};

/// Lag grid and correlation samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    pub dtau: f64,
    pub g1: Vec<C64>,
    /// `⟨σ⁺_m(t0+τ) a(t0)⟩` at every lag, one vector per sample.
    pub cross: Vec<Vec<C64>>,
}

impl CorrelationSeries {
    pub fn tau(&self, k: usize) -> f64 {
        k as f64 * self.dtau
    }

    pub fn len(&self) -> usize {
        self.g1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g1.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorrelationSettings {
    pub tol: Tolerances,
    /// Lag horizon [1/Γ].
    pub tau_max: f64,
    pub dtau: f64,
    /// Hold positions and momenta at their anchor values while evolving in τ.
    pub freeze_motion: bool,
}

impl Default for CorrelationSettings {
    fn default() -> Self {
        CorrelationSettings {
            tol: Tolerances::default(),
            tau_max: 50.0,
            dtau: 0.02,
            freeze_motion: false,
        }
    }
}

/// Evolves `g¹` and `⟨σ⁺_m(t0+τ) a(t0)⟩` from one anchor, co-integrating
/// the single-time moments that supply the mean-field coefficients.
pub fn correlation_evolve(
    anchor: &CumulantState,
    t0: f64,
    params: &PhysParams,
    mult: &Multiplicity,
    settings: &CorrelationSettings,
) -> Result<CorrelationSeries> {
    let layout = anchor.layout();
    if layout != Layout::for_multiplicity(mult) {
        return Err(Error::Spectrum("anchor layout does not match the multiplicities".into()));
    }
    if !(settings.dtau > 0.0 && settings.tau_max > settings.dtau) {
        return Err(Error::Spectrum(format!(
            "lag grid needs 0 < dtau < tau_max, got dtau={} tau_max={}",
            settings.dtau, settings.tau_max
        )));
    }
    let n = layout.n_atoms();
    let base = layout.len();
    let a0 = anchor.a_mean();
    let weights: Vec<f64> = mult.weights().iter().map(|&w| f64::from(w)).collect();
    let w_u32 = mult.weights().to_vec();
    let g = params.g;
    let i = C64::i();
    let gamma_half = 0.5 * params.gamma;
    let kappa_half = 0.5 * params.kappa;

    let mut y0 = anchor.as_slice().to_vec();
    y0.extend([anchor.n_photon(), 0.0]);
    for m in 0..n {
        let c = anchor.a_sigma_plus(m);
        y0.extend([c.re, c.im]);
    }

    let rhs = |tau: f64, y: &[f64], dy: &mut [f64]| {
        let t = t0 + tau;
        let (single, corr) = y.split_at(base);
        let (dsingle, dcorr) = dy.split_at_mut(base);
        cumulant::rhs_into(layout, params, &w_u32, t, single, dsingle);
        if settings.freeze_motion {
            for m in 0..n {
                let k = layout.atom(m);
                dsingle[k + 5] = 0.0;
                dsingle[k + 6] = 0.0;
            }
        }
        let drive_c = params.drive_amplitude(t).conj();
        let g1 = C64::new(corr[0], corr[1]);
        let mut source = C64::new(0.0, 0.0);
        for m in 0..n {
            let k = layout.atom(m);
            let (s, c) = single[k + 5].sin_cos();
            let z = 2.0 * single[k + 4] - 1.0;
            let cm = C64::new(corr[2 + 2 * m], corr[3 + 2 * m]);
            source += weights[m] * s * cm;
            let dcm = -(gamma_half + i * params.detuning(m)) * cm - i * g * s * z * g1 - i * drive_c * c * z * a0;
            dcorr[2 + 2 * m] = dcm.re;
            dcorr[3 + 2 * m] = dcm.im;
        }
        let dg1 = -(kappa_half + i * params.delta_c) * g1 + i * g * source;
        dcorr[0] = dg1.re;
        dcorr[1] = dg1.im;
    };

    let mut g1 = Vec::new();
    let mut cross = Vec::new();
    ode::integrate_with(
        OdeProblem::new(rhs, (0.0, settings.tau_max), y0, settings.dtau),
        Settings::from(settings.tol),
        |_tau, y| {
            let corr = &y[base..];
            g1.push(C64::new(corr[0], corr[1]));
            cross.push((0..n).map(|m| C64::new(corr[2 + 2 * m], corr[3 + 2 * m])).collect());
            Ok::<(), Error>(())
        },
    )
    .map_err(|e| match e {
        Error::Integration(inner) => cumulant::map_ode_error(layout, inner),
        other => other,
    })?;
    // a final sample closer than one step to tau_max would break uniformity
    let uniform = (settings.tau_max / settings.dtau + 1e-9).floor() as usize + 1;
    g1.truncate(uniform);
    cross.truncate(uniform);
    Ok(CorrelationSeries {
        dtau: settings.dtau,
        g1,
        cross,
    })
}

/// Anchor times: `n` equidistant points in `[t_end − window, t_end]`.
pub fn anchor_times(t_end: f64, window: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t_end],
        _ => (0..n)
            .map(|k| t_end - window + window * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Mean `g¹` over `n_anchors` anchors picked from stored snapshots (the
/// sample nearest each equidistant anchor time is used).
pub fn average_g1(
    snapshots: &[(f64, CumulantState)],
    params: &PhysParams,
    mult: &Multiplicity,
    n_anchors: usize,
    window: f64,
    settings: &CorrelationSettings,
) -> Result<CorrelationSeries> {
    let anchors = select_anchors(snapshots, n_anchors, window)?;
    mean_g1(&anchors, params, mult, settings)
}

/// Picks the stored samples nearest to [`anchor_times`] over the last
/// `window` of the snapshot span.
pub fn select_anchors(
    snapshots: &[(f64, CumulantState)],
    n_anchors: usize,
    window: f64,
) -> Result<Vec<(f64, CumulantState)>> {
    let (first, last) = match (snapshots.first(), snapshots.last()) {
        (Some(f), Some(l)) => (f.0, l.0),
        _ => return Err(Error::Spectrum("no stored states to anchor on".into())),
    };
    if n_anchors == 0 {
        return Err(Error::Spectrum("n_anchors must be at least 1".into()));
    }
    if window > last - first + 1e-9 || window < 0.0 {
        return Err(Error::Spectrum(format!(
            "anchor window {window} exceeds the stored span [{first}, {last}]"
        )));
    }
    Ok(anchor_times(last, window, n_anchors)
        .into_iter()
        .map(|t| snapshots[nearest_sample(snapshots, t)].clone())
        .collect())
}

/// Runs [`correlation_evolve`] from every anchor in parallel and averages
/// the series in anchor order.
pub fn mean_g1(
    anchors: &[(f64, CumulantState)],
    params: &PhysParams,
    mult: &Multiplicity,
    settings: &CorrelationSettings,
) -> Result<CorrelationSeries> {
    if anchors.is_empty() {
        return Err(Error::Spectrum("no anchors".into()));
    }
    let runs: Vec<CorrelationSeries> = anchors
        .par_iter()
        .map(|(t0, state)| correlation_evolve(state, *t0, params, mult, settings))
        .collect::<Result<_>>()?;
    let mut mean = runs[0].clone();
    for run in &runs[1..] {
        for (acc, v) in mean.g1.iter_mut().zip(&run.g1) {
            *acc += v;
        }
        for (acc, v) in mean.cross.iter_mut().zip(&run.cross) {
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
        }
    }
    let scale = 1.0 / runs.len() as f64;
    mean.g1.iter_mut().for_each(|z| *z *= scale);
    mean.cross.iter_mut().flatten().for_each(|z| *z *= scale);
    Ok(mean)
}

fn nearest_sample(snapshots: &[(f64, CumulantState)], t: f64) -> usize {
    let k = snapshots.partition_point(|(ts, _)| *ts < t);
    if k == 0 {
        0
    } else if k == snapshots.len() || (t - snapshots[k - 1].0) <= (snapshots[k].0 - t) {
        k - 1
    } else {
        k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub center: f64,
    pub height: f64,
    pub fwhm: f64,
}

/// Transform settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransformSettings {
    /// Apodization time `T_w` of `e^{−τ/T_w}`; `None` uses `τ_max / 3`.
    pub window_time: Option<f64>,
    /// Turn the apodization off.
    pub apodize: bool,
    /// The FFT length is the next power of two `≥ pad_factor · samples`.
    pub pad_factor: usize,
}

impl Default for TransformSettings {
    fn default() -> Self {
        TransformSettings {
            window_time: None,
            apodize: true,
            pad_factor: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub dtau: f64,
    pub tau_max: f64,
    /// Apodization time, `None` when no window was applied.
    pub window_time: Option<f64>,
    pub n_fft: usize,
    /// Grid spacing `2π / (n_fft · dτ)` [Γ].
    pub bin_width: f64,
    /// Shift between the rotating-frame axis and the reported axis.
    pub delta_a: f64,
}

/// Spectrum on a uniform ascending grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Frequency relative to the bare atomic transition [Γ].
    pub omega: Vec<f64>,
    /// Frequency in the frame rotating with the first drive [Γ].
    pub omega_frame: Vec<f64>,
    pub s: Vec<f64>,
    pub peaks: Vec<Peak>,
    pub meta: SpectrumMeta,
}

impl SpectrumResult {
    pub fn bin_width(&self) -> f64 {
        self.meta.bin_width
    }

    /// `s` divided by its maximum.
    pub fn normalized(&self) -> Vec<f64> {
        let max = self.s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max > 0.0 {
            self.s.iter().map(|v| v / max).collect()
        } else {
            self.s.clone()
        }
    }

    /// Fills `peaks` using a prominence threshold relative to the maximum.
    pub fn detect_peaks(&mut self, relative_prominence: f64) {
        let max = self.s.iter().cloned().fold(0.0, f64::max);
        self.peaks = find_peaks(&self.omega, &self.s, relative_prominence * max);
    }
}

/// One-sided Fourier transform of uniformly sampled `g1` (trapezoid rule,
/// zero-padded FFT), times two, real part.
pub fn wiener_khinchin(g1: &[C64], dtau: f64, delta_a: f64, settings: &TransformSettings) -> Result<SpectrumResult> {
    if g1.len() < 2 {
        return Err(Error::Spectrum("need at least two correlation samples".into()));
    }
    if !(dtau > 0.0 && dtau.is_finite()) {
        return Err(Error::Spectrum(format!("invalid lag step {dtau}")));
    }
    if g1.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Spectrum("non-finite correlation sample".into()));
    }
    let m = g1.len();
    let tau_max = (m - 1) as f64 * dtau;
    let window_time = if settings.apodize {
        Some(settings.window_time.unwrap_or(tau_max / 3.0))
    } else {
        None
    };
    let n_fft = (settings.pad_factor.max(1) * m).next_power_of_two();
    let mut buf = vec![C64::new(0.0, 0.0); n_fft];
    for (k, (slot, &v)) in buf.iter_mut().zip(g1).enumerate() {
        let trapezoid = if k == 0 || k == m - 1 { 0.5 } else { 1.0 };
        let apod = window_time.map_or(1.0, |tw| (-(k as f64) * dtau / tw).exp());
        *slot = v * (trapezoid * apod * dtau);
    }
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);

    let bin_width = 2.0 * std::f64::consts::PI / (n_fft as f64 * dtau);
    let half = n_fft / 2;
    let mut omega_frame = Vec::with_capacity(n_fft);
    let mut s = Vec::with_capacity(n_fft);
    for j in 0..n_fft {
        // ascending order: bins half..n_fft are the negative frequencies
        let k = (j + half) % n_fft;
        let freq = if k >= half { k as f64 - n_fft as f64 } else { k as f64 };
        omega_frame.push(freq * bin_width);
        s.push(2.0 * buf[k].re);
    }
    let omega = omega_frame.iter().map(|w| w + delta_a).collect();
    Ok(SpectrumResult {
        omega,
        omega_frame,
        s,
        peaks: Vec::new(),
        meta: SpectrumMeta {
            dtau,
            tau_max,
            window_time,
            n_fft,
            bin_width,
            delta_a,
        },
    })
}

/// Local maxima of `s` with prominence at least `min_prominence`, refined
/// by a parabola through the three top samples.
pub fn find_peaks(omega: &[f64], s: &[f64], min_prominence: f64) -> Vec<Peak> {
    let n = s.len().min(omega.len());
    let mut peaks = Vec::new();
    if n < 3 {
        return peaks;
    }
    let step = omega[1] - omega[0];
    let mut i = 1;
    while i < n - 1 {
        if !(s[i] > s[i - 1]) {
            i += 1;
            continue;
        }
        // plateau: walk to its right edge
        let mut r = i;
        while r + 1 < n && s[r + 1] == s[i] {
            r += 1;
        }
        if r + 1 >= n || !(s[r + 1] < s[i]) {
            i = r + 1;
            continue;
        }
        let top = (i + r) / 2;
        let prominence = s[top] - base_level(s, i, r);
        if prominence >= min_prominence && prominence > 0.0 {
            let (y0, y1, y2) = (s[top - 1], s[top], s[top + 1]);
            let curv = y0 - 2.0 * y1 + y2;
            let delta = if curv < 0.0 { 0.5 * (y0 - y2) / curv } else { 0.0 };
            let height = y1 - 0.25 * (y0 - y2) * delta;
            let center = omega[top] + delta * step;
            let fwhm = half_width_crossings(omega, s, top, 0.5 * height);
            peaks.push(Peak { center, height, fwhm });
        }
        i = r + 1;
    }
    peaks
}

fn base_level(s: &[f64], left_edge: usize, right_edge: usize) -> f64 {
    let h = s[left_edge];
    let mut left_min = h;
    for k in (0..left_edge).rev() {
        if s[k] > h {
            break;
        }
        left_min = left_min.min(s[k]);
    }
    let mut right_min = h;
    for &v in &s[right_edge + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    left_min.max(right_min)
}

fn half_width_crossings(omega: &[f64], s: &[f64], top: usize, half: f64) -> f64 {
    let cross = |a: usize, b: usize| {
        let t = (s[a] - half) / (s[a] - s[b]);
        omega[a] + t * (omega[b] - omega[a])
    };
    let left = (1..=top)
        .rev()
        .find(|&k| s[k - 1] < half)
        .map_or(omega[0], |k| cross(k, k - 1));
    let right = (top..s.len() - 1)
        .find(|&k| s[k + 1] < half)
        .map_or(omega[s.len() - 1], |k| cross(k, k + 1));
    right - left
}

/// Doppler sidebands `ω± = ±2 ω_r p_st` [Γ].
pub fn sideband_frequencies(omega_r: f64, p_stationary: f64) -> (f64, f64) {
    let shift = 2.0 * omega_r * p_stationary;
    (shift, -shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AtomPhase;
    use crate::quantum::{self, FullState, HilbertSpace};
    use approx::assert_abs_diff_eq;

    fn series(dtau: f64, tau_max: f64, f: impl Fn(f64) -> C64) -> Vec<C64> {
        let m = (tau_max / dtau).round() as usize + 1;
        (0..m).map(|k| f(k as f64 * dtau)).collect()
    }

    fn raw() -> TransformSettings {
        TransformSettings {
            apodize: false,
            pad_factor: 8,
            ..TransformSettings::default()
        }
    }

    #[test]
    fn damped_exponential_is_lorentzian() {
        let g1 = series(0.005, 60.0, |t| C64::new((-0.5 * t).exp(), 0.0));
        let mut spec = wiener_khinchin(&g1, 0.005, 0.0, &raw()).unwrap();
        spec.detect_peaks(0.1);
        assert_eq!(spec.peaks.len(), 1);
        let p = spec.peaks[0];
        assert!(p.center.abs() < spec.bin_width());
        assert!((p.height - 4.0).abs() < 0.01 * 4.0, "{p:?}");
        assert!((p.fwhm - 1.0).abs() < 0.01, "{p:?}");
        // pointwise against 1/(1/4 + ω²)
        for (w, s) in spec.omega_frame.iter().zip(&spec.s) {
            if w.abs() < 5.0 {
                assert_abs_diff_eq!(*s, 1.0 / (0.25 + w * w), epsilon = 2e-3);
            }
        }
    }

    #[test]
    fn parseval_normalization() {
        let g1 = series(0.02, 40.0, |t| C64::from_polar((-0.3 * t).exp() * 1.7, 2.0 * t));
        for settings in [raw(), TransformSettings::default()] {
            let spec = wiener_khinchin(&g1, 0.02, 0.0, &settings).unwrap();
            let integral: f64 = spec.s.iter().sum::<f64>() * spec.bin_width() / (2.0 * std::f64::consts::PI);
            assert!((integral - 1.7).abs() < 0.01 * 1.7, "{integral}");
        }
    }

    #[test]
    fn frequency_shift_and_frame() {
        let w0 = -3.3;
        let g1 = series(0.01, 40.0, |t| C64::from_polar((-t).exp(), w0 * t));
        let mut spec = wiener_khinchin(&g1, 0.01, -20.0, &raw()).unwrap();
        spec.detect_peaks(0.1);
        assert_eq!(spec.peaks.len(), 1);
        // e^{iω₀τ} peaks at ω = ω₀ in the e^{−iωτ} convention
        assert!((spec.peaks[0].center - (w0 - 20.0)).abs() < spec.bin_width());
        assert!(spec.omega.windows(2).all(|w| (w[1] - w[0] - spec.bin_width()).abs() < 1e-9));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(wiener_khinchin(&[C64::new(1.0, 0.0)], 0.1, 0.0, &raw()).is_err());
        assert!(wiener_khinchin(&[C64::new(1.0, 0.0); 4], 0.0, 0.0, &raw()).is_err());
        assert!(wiener_khinchin(&[C64::new(f64::NAN, 0.0); 4], 0.1, 0.0, &raw()).is_err());
    }

    #[test]
    fn lorentzian_peak_finder() {
        let omega: Vec<f64> = (0..4001).map(|k| -20.0 + 0.01 * k as f64).collect();
        let lor = |w: f64, c: f64, hw: f64| 1.0 / (1.0 + ((w - c) / hw).powi(2));
        let single: Vec<f64> = omega.iter().map(|&w| lor(w, 1.234, 0.8)).collect();
        let peaks = find_peaks(&omega, &single, 0.1);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].center - 1.234).abs() < 1e-3);
        assert!((peaks[0].fwhm - 1.6).abs() < 0.05 * 1.6);

        let double: Vec<f64> = omega.iter().map(|&w| lor(w, -5.0, 0.5) + lor(w, 5.0, 0.5)).collect();
        assert_eq!(find_peaks(&omega, &double, 0.1).len(), 2);

        assert!(find_peaks(&omega, &vec![0.7; omega.len()], 0.0).is_empty());
    }

    #[test]
    fn sidebands() {
        assert_eq!(sideband_frequencies(6.0, 2.0), (24.0, -24.0));
        assert_eq!(sideband_frequencies(6.0, -2.0), (-24.0, 24.0));
        let (p, m) = sideband_frequencies(3.0, 0.0);
        assert_eq!(p, 0.0);
        assert_eq!(m, 0.0);
    }

    fn empty_cavity_params() -> PhysParams {
        PhysParams {
            kappa: 2.0,
            gamma: 1.0,
            g: 0.0,
            omega_drive: 0.0,
            delta_a: -1.5,
            delta_c: -1.5,
            eta: 0.0,
            delta_eta: 0.0,
            omega_r: 0.0,
            n_max: 3,
            n_atoms: 1,
            detuning_offsets: None,
        }
    }

    #[test]
    fn empty_cavity_correlation() {
        let params = empty_cavity_params();
        let mult = Multiplicity::uniform(1);
        let mut anchor = CumulantState::ground(&[AtomPhase::new(0.0, 0.0)], &mult).unwrap();
        anchor.set_n_photon(0.8);
        let settings = CorrelationSettings {
            tol: Tolerances::new(1e-10, 1e-12),
            tau_max: 20.0,
            dtau: 0.01,
            freeze_motion: false,
        };
        let c = correlation_evolve(&anchor, 3.0, &params, &mult, &settings).unwrap();
        assert_eq!(c.g1[0], C64::new(0.8, 0.0));
        assert_eq!(c.len(), 2001);
        for (k, z) in c.g1.iter().enumerate() {
            let t = c.tau(k);
            let exact = C64::from_polar(0.8 * (-t).exp(), 1.5 * t);
            assert!((z - exact).norm() < 1e-8);
        }
        let mut spec = wiener_khinchin(&c.g1, c.dtau, params.delta_a, &raw()).unwrap();
        spec.detect_peaks(0.1);
        assert_eq!(spec.peaks.len(), 1);
        // cavity sits at ω_frame = −Δc
        assert!((spec.peaks[0].center - (-params.delta_c + params.delta_a)).abs() < spec.bin_width());
        assert!((spec.peaks[0].fwhm - params.kappa).abs() < 0.02 * params.kappa);
    }

    #[test]
    fn identical_anchors_average_to_one_member() {
        let params = PhysParams { g: 1.0, omega_drive: 2.0, ..empty_cavity_params() };
        let mult = Multiplicity::uniform(1);
        let mut anchor = CumulantState::ground(&[AtomPhase::new(0.4, 0.0)], &mult).unwrap();
        anchor.set_n_photon(0.3);
        anchor.set_pop(0, 0.2);
        let settings = CorrelationSettings { tau_max: 5.0, dtau: 0.05, ..CorrelationSettings::default() };
        let snaps: Vec<_> = (0..5).map(|k| (10.0 + k as f64, anchor.clone())).collect();
        // η = 0 and ω_r = 0: anchors at different t0 are physically identical
        let avg = average_g1(&snaps, &params, &mult, 4, 3.0, &settings).unwrap();
        let one = correlation_evolve(&anchor, 14.0, &params, &mult, &settings).unwrap();
        for (a, b) in avg.g1.iter().zip(&one.g1) {
            assert!((a - b).norm() < 1e-12);
        }
        let single = average_g1(&snaps, &params, &mult, 1, 0.0, &settings).unwrap();
        assert_eq!(single, one);
        assert!(average_g1(&snaps, &params, &mult, 2, 10.0, &settings).is_err());
    }

    #[test]
    fn anchor_grid() {
        assert_eq!(anchor_times(100.0, 20.0, 1), vec![100.0]);
        assert_eq!(anchor_times(100.0, 20.0, 3), vec![80.0, 90.0, 100.0]);
    }

    #[test]
    fn pinned_resonant_atom_narrows_below_cavity_width() {
        // bad cavity toy: κ = 10, one atom at the coupling antinode, weak drive
        let params = PhysParams {
            kappa: 10.0,
            gamma: 1.0,
            g: 1.0,
            omega_drive: 0.0,
            delta_a: 0.0,
            delta_c: 0.0,
            eta: 0.0,
            delta_eta: 0.0,
            omega_r: 0.0,
            n_max: 3,
            n_atoms: 1,
            detuning_offsets: None,
        };
        let x = std::f64::consts::FRAC_PI_2;
        let tol = Tolerances::new(1e-9, 1e-12);
        // excited atom, empty cavity, a short time in
        let space = HilbertSpace::new(1, 3).unwrap();
        let init = FullState::product(&space, 1, 0, vec![AtomPhase::new(x, 0.0)]);
        let full = quantum::simulate_full(
            &params,
            &space,
            init,
            0.3,
            &quantum::FullSettings { tol, ..Default::default() },
        )
        .unwrap();
        let rho = &full.final_state.rho;
        let oracle = quantum::two_time_g1(&params, &space, rho, &full.final_state.phases, 0.3, 30.0, 0.01, tol).unwrap();

        let mult = Multiplicity::uniform(1);
        let mut anchor = CumulantState::ground(&[AtomPhase::new(x, 0.0)], &mult).unwrap();
        anchor.set_pop(0, 1.0);
        let cum = cumulant::simulate_cumulant(
            &params,
            anchor,
            &mult,
            (0.0, 0.3),
            &cumulant::CumulantSettings { tol, ..Default::default() },
        )
        .unwrap();
        let settings = CorrelationSettings { tol, tau_max: 30.0, dtau: 0.01, freeze_motion: true };
        let corr = correlation_evolve(&cum.final_state, 0.3, &params, &mult, &settings).unwrap();

        let width = |g1: &[C64]| {
            let mut s = wiener_khinchin(g1, 0.01, 0.0, &raw()).unwrap();
            s.detect_peaks(0.2);
            assert_eq!(s.peaks.len(), 1, "{:?}", s.peaks);
            assert!(s.peaks[0].center.abs() < 2.0 * s.bin_width());
            s.peaks[0].fwhm
        };
        let w_oracle = width(&oracle);
        let w_cum = width(&corr.g1);
        assert!(w_oracle < params.kappa && w_cum < params.kappa, "{w_oracle} {w_cum}");
        assert!((w_cum - w_oracle).abs() < 0.25 * w_oracle, "{w_oracle} {w_cum}");
        // the closure is not exact with the cavity on; same photon number to a few percent
        assert!((corr.g1[0].re - oracle[0].re).abs() < 0.05 * oracle[0].re);
    }
}
