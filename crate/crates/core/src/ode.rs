// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive Dormand–Prince 5(4) integration with dense output.
//!
//! States are flat `f64` vectors; complex quantities are stored as
//! interleaved `(re, im)` pairs by the callers. Output is produced on a
//! uniform sampling grid by the continuous 4th-order extension, so the
//! sampling interval never restricts the internal step size.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("non-finite derivative component {index} at t = {t}")]
    NonFinite { t: f64, index: usize },
    #[error("maximum number of steps ({max_steps}) reached at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Tolerances { rel_tol, abs_tol }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub steps: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

impl SolverStats {
    pub fn accumulate(&mut self, other: &SolverStats) {
        self.steps += other.steps;
        self.rejected += other.rejected;
        self.rhs_evals += other.rhs_evals;
    }
}

/// An initial value problem `dy/dt = rhs(t, y)` sampled every `sample_dt`.
///
/// `rhs(t, y, dy)` must overwrite every component of `dy` and depend only
/// on its arguments.
pub struct OdeProblem<F> {
    pub rhs: F,
    pub t0: f64,
    pub t1: f64,
    pub y0: Vec<f64>,
    pub sample_dt: f64,
}

impl<F> OdeProblem<F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    pub fn new(rhs: F, t_span: (f64, f64), y0: Vec<f64>, sample_dt: f64) -> Self {
        OdeProblem {
            rhs,
            t0: t_span.0,
            t1: t_span.1,
            y0,
            sample_dt,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub stats: SolverStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&[f64]> {
        self.states.last().map(|s| s.as_slice())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub tol: Tolerances,
    /// Upper bound on the internal step; `None` means the whole span.
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: Tolerances::default(),
            max_step: None,
            max_steps: 50_000_000,
        }
    }
}

impl From<Tolerances> for Settings {
    fn from(tol: Tolerances) -> Self {
        Settings {
            tol,
            ..Settings::default()
        }
    }
}

/// Integrates and stores every sample.
pub fn integrate<F>(problem: OdeProblem<F>, tol: Tolerances) -> Result<Trajectory, OdeError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut times = Vec::new();
    let mut states = Vec::new();
    let stats = integrate_with(problem, tol.into(), |t, y| {
        times.push(t);
        states.push(y.to_vec());
        Ok::<(), OdeError>(())
    })?;
    Ok(Trajectory {
        times,
        states,
        stats,
    })
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

fn check_finite(k: &[f64], t: f64) -> Result<(), OdeError> {
    match k.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(OdeError::NonFinite { t, index }),
        None => Ok(()),
    }
}

/// Integrates and hands each sample `(t, y)` to `observer`.
///
/// Samples are emitted at `t0 + k·sample_dt` and at `t1`. The observer may
/// abort the integration by returning an error.
pub fn integrate_with<F, O, E>(
    problem: OdeProblem<F>,
    settings: Settings,
    mut observer: O,
) -> Result<SolverStats, E>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]) -> Result<(), E>,
    E: From<OdeError>,
{
    let OdeProblem {
        mut rhs,
        t0,
        t1,
        y0,
        sample_dt,
    } = problem;
    let tol = settings.tol;
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(OdeError::InvalidProblem(format!("empty time span [{t0}, {t1}]")).into());
    }
    if !(tol.rel_tol > 0.0 && tol.abs_tol > 0.0) {
        return Err(OdeError::InvalidProblem("tolerances must be positive".into()).into());
    }
    if !(sample_dt > 0.0) {
        return Err(OdeError::InvalidProblem("sample_dt must be positive".into()).into());
    }
    if let Some(bad) = y0.iter().position(|v| !v.is_finite()) {
        return Err(OdeError::InvalidProblem(format!("non-finite initial component {bad}")).into());
    }

    let n = y0.len();
    let span = t1 - t0;
    let h_max = settings.max_step.unwrap_or(span).min(span);
    let mut stats = SolverStats::default();

    let mut y = y0;
    let mut y1 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut dense = vec![[0.0f64; 5]; n];
    let mut sample = vec![0.0; n];

    let mut t = t0;
    rhs(t, &y, &mut k1);
    stats.rhs_evals += 1;
    check_finite(&k1, t)?;
    observer(t, &y)?;

    // Sample bookkeeping: the next sample index and the total count.
    let n_grid = {
        let m = (span / sample_dt).floor() as usize;
        // drop a grid point that coincides with t1 up to rounding
        if t0 + m as f64 * sample_dt > t1 - 1e-9 * sample_dt {
            m.saturating_sub(1)
        } else {
            m
        }
    };
    let mut next_sample = 1usize;

    let mut h = initial_step(&mut rhs, t, &y, &k1, tol, h_max, &mut ytmp, &mut k2);
    stats.rhs_evals += 1;
    let mut fac_old = 1e-4f64;
    let mut last_rejected = false;

    loop {
        if stats.steps + stats.rejected >= settings.max_steps {
            return Err(OdeError::TooManySteps {
                t,
                max_steps: settings.max_steps,
            }
            .into());
        }
        let mut last = false;
        if t + 1.01 * h >= t1 {
            h = t1 - t;
            last = true;
        }
        if h.abs() <= 10.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(OdeError::StepSizeUnderflow { t, h }.into());
        }

        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        rhs(t + C2 * h, &ytmp, &mut k2);
        check_finite(&k2, t + C2 * h)?;
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(t + C3 * h, &ytmp, &mut k3);
        check_finite(&k3, t + C3 * h)?;
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(t + C4 * h, &ytmp, &mut k4);
        check_finite(&k4, t + C4 * h)?;
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(t + C5 * h, &ytmp, &mut k5);
        check_finite(&k5, t + C5 * h)?;
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        rhs(t + h, &ytmp, &mut k6);
        check_finite(&k6, t + h)?;
        for i in 0..n {
            y1[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        rhs(t + h, &y1, &mut k7);
        check_finite(&k7, t + h)?;
        stats.rhs_evals += 6;

        let mut err = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sk = tol.abs_tol + tol.rel_tol * y[i].abs().max(y1[i].abs());
            err += (e / sk) * (e / sk);
        }
        let err = (err / n.max(1) as f64).sqrt();

        let expo = 0.2 - BETA * 0.75;
        let fac11 = err.powf(expo);
        if err <= 1.0 {
            // accepted: build the continuous extension on [t, t + h]
            for i in 0..n {
                let ydiff = y1[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                dense[i] = [
                    y[i],
                    ydiff,
                    bspl,
                    ydiff - h * k7[i] - bspl,
                    h * (D1 * k1[i]
                        + D3 * k3[i]
                        + D4 * k4[i]
                        + D5 * k5[i]
                        + D6 * k6[i]
                        + D7 * k7[i]),
                ];
            }
            let t_new = if last { t1 } else { t + h };
            while next_sample <= n_grid {
                let ts = t0 + next_sample as f64 * sample_dt;
                if ts > t_new {
                    break;
                }
                let theta = (ts - t) / h;
                let theta1 = 1.0 - theta;
                for (s, d) in sample.iter_mut().zip(&dense) {
                    *s = d[0] + theta * (d[1] + theta1 * (d[2] + theta * (d[3] + theta1 * d[4])));
                }
                observer(ts, &sample)?;
                next_sample += 1;
            }

            std::mem::swap(&mut k1, &mut k7);
            std::mem::swap(&mut y, &mut y1);
            t = t_new;
            stats.steps += 1;

            if last {
                observer(t, &y)?;
                return Ok(stats);
            }

            let mut fac = fac11 / fac_old.powf(BETA);
            fac_old = err.max(1e-4);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = (h / fac).min(h_max);
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new;
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }
}

/// Starting step from the local Lipschitz estimate (Hairer, Nørsett & Wanner).
#[allow(clippy::too_many_arguments)]
fn initial_step<F>(
    rhs: &mut F,
    t: f64,
    y: &[f64],
    f0: &[f64],
    tol: Tolerances,
    h_max: f64,
    ytmp: &mut [f64],
    f1: &mut [f64],
) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len().max(1) as f64;
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..y.len() {
        let sk = tol.abs_tol + tol.rel_tol * y[i].abs();
        dnf += (f0[i] / sk).powi(2);
        dny += (y[i] / sk).powi(2);
    }
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h = h.min(h_max);
    for i in 0..y.len() {
        ytmp[i] = y[i] + h * f0[i];
    }
    rhs(t + h, ytmp, f1);
    let mut der2 = 0.0;
    for i in 0..y.len() {
        let sk = tol.abs_tol + tol.rel_tol * y[i].abs();
        der2 += ((f1[i] - f0[i]) / sk).powi(2);
    }
    let der2 = (der2 / n).sqrt() / h;
    let der12 = der2.abs().max((dnf / n).sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(h_max)
}
