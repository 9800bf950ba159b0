// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario execution and file output.
//!
//! Every scenario computes all of its outputs in memory before the first
//! file is written, so a failed run leaves nothing behind.

use std::path::{Component, Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig, Scenario};
use crate::cumulant::{simulate_cumulant, CumulantSettings, CumulantState, Multiplicity};
use crate::error::{Error, Result};
use crate::model::{light_shift_profile, regime_check, AtomPhase, RegimeReport};
use crate::ode::SolverStats;
use crate::output::{self, AnchorFile, Sample, Table, SCHEMA_VERSION};
use crate::quantum::{init_ensemble, simulate_full, FullSettings, FullState, HilbertSpace};
use crate::spectrum::{self, sideband_frequencies, wiener_khinchin, Peak, SpectrumMeta};

/// Environment variable naming the root for relative output directories.
pub const OUTPUT_ROOT_ENV: &str = "SUPERLASER_OUT";

impl Error {
    /// Process exit status for this error category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParams(_) | Error::DegenerateDressedBasis => 2,
            Error::DimensionBudget { .. } => 3,
            Error::Integration(_) | Error::NonFiniteMoment { .. } | Error::Positivity { .. } => 4,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileEntry {
    pub file: String,
    /// CSV header; empty for JSON files.
    pub columns: Vec<String>,
}

/// Averages over the late window `[t_end − spectrum.window, t_end]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub window: [f64; 2],
    pub mean_n_photon: f64,
    pub mean_n_laser: f64,
    pub mean_n_scatter: f64,
    /// Fraction of all samples in which some atom has `⟨σz⟩ > 0`.
    pub positive_inversion_fraction: f64,
    pub max_inversion: f64,
    pub mean_p: Vec<f64>,
    pub sd_p: Vec<f64>,
    /// See [`p_stationary`].
    pub p_stationary: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumInfo {
    pub meta: SpectrumMeta,
    pub n_anchors: usize,
    pub anchor_times: Vec<f64>,
    pub p_stationary: Option<f64>,
    /// `(ω₊, ω₋)` relative to ω_a.
    pub predicted_sidebands: Option<(f64, f64)>,
    /// Highest peak.
    pub central_peak: Option<Peak>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub code_version: &'static str,
    pub name: String,
    pub scenario: &'static str,
    pub config: RunConfig,
    pub stats: SolverStats,
    pub files: Vec<FileEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumInfo>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub directory: PathBuf,
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
}

impl RunReport {
    pub fn paths(&self) -> Vec<PathBuf> {
        self.manifest
            .files
            .iter()
            .map(|f| self.directory.join(&f.file))
            .chain(std::iter::once(self.manifest_path.clone()))
            .collect()
    }
}

/// Pending output: file name and contents.
struct Outputs {
    entries: Vec<FileEntry>,
    contents: Vec<String>,
}

impl Outputs {
    fn new() -> Self {
        Outputs {
            entries: Vec::new(),
            contents: Vec::new(),
        }
    }

    fn table(&mut self, t: Table) {
        self.contents.push(t.render());
        self.entries.push(FileEntry {
            file: t.file,
            columns: t.columns,
        });
    }

    fn json(&mut self, file: String, text: String) {
        self.contents.push(text);
        self.entries.push(FileEntry { file, columns: Vec::new() });
    }
}

/// Resolves the output directory: relative directories are placed under
/// `root` when given.
pub fn output_dir(config: &RunConfig, root: Option<&Path>) -> PathBuf {
    let dir = match root {
        Some(r) if config.output.directory.is_relative() => r.join(&config.output.directory),
        _ => config.output.directory.clone(),
    };
    let clean: PathBuf = dir.components().filter(|c| *c != Component::CurDir).collect();
    if clean.as_os_str().is_empty() {
        PathBuf::from(".")
    } else {
        clean
    }
}

/// Reads [`OUTPUT_ROOT_ENV`].
pub fn output_root_from_env() -> Option<PathBuf> {
    std::env::var_os(OUTPUT_ROOT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Runs the scenario and writes its files plus `{name}_manifest.json`.
pub fn execute(config: &RunConfig, root: Option<&Path>) -> Result<RunReport> {
    config.validate()?;
    let mut out = Outputs::new();
    let mut stats = SolverStats::default();
    let mut summary = None;
    let mut spectrum_info = None;
    let name = config.name.as_str();
    let p = &config.params;

    match config.scenario {
        Scenario::DressedProfile => {
            out.table(output::dressed_table(name, &light_shift_profile(p, &config.profile.grid())));
        }
        Scenario::SingleFull | Scenario::EnsembleFull => {
            let space = HilbertSpace::new(p.n_atoms, p.n_max)?;
            let phases = initial_phases(config)?;
            let mask = config.init.excited.iter().fold(0u32, |m, &k| m | 1 << k);
            let init = FullState::product(&space, mask, config.init.photons, phases);
            let settings = FullSettings {
                tol: config.integration.tolerances(),
                sample_dt: config.integration.sample_dt,
                positivity_tol: config.integration.positivity_tol,
                cache_static_hamiltonian: true,
            };
            let traj = simulate_full(p, &space, init, config.integration.t_end, &settings)?;
            stats = traj.stats;
            let samples: Vec<Sample<'_>> = traj
                .records
                .iter()
                .map(|r| Sample {
                    t: r.t,
                    observables: &r.observables,
                    phases: &r.phases,
                })
                .collect();
            out.table(output::trajectory_table(name, &samples));
            out.table(output::observables_table(name, &samples, p.omega_r));
            let diag: Vec<_> = traj.records.iter().map(|r| (r.t, r.diagnostics)).collect();
            out.table(output::diagnostics_table(name, &diag));
            summary = Some(summarize(&samples, config.spectrum.window));
        }
        Scenario::Cumulant | Scenario::Spectrum => {
            let mult = multiplicity(config)?;
            let mut init = CumulantState::ground(&initial_phases(config)?, &mult)?;
            for &m in &config.init.excited {
                init.set_pop(m, 1.0);
            }
            init.set_n_photon(config.init.photons as f64);
            let t_end = config.integration.t_end;
            let window = config.spectrum.window;
            let settings = CumulantSettings {
                tol: config.integration.tolerances(),
                sample_dt: config.integration.sample_dt,
                keep_states_from: (window <= t_end).then_some(t_end - window),
            };
            let traj = simulate_cumulant(p, init, &mult, (0.0, t_end), &settings)?;
            stats = traj.stats;
            let samples: Vec<Sample<'_>> = traj
                .records
                .iter()
                .map(|r| Sample {
                    t: r.t,
                    observables: &r.observables,
                    phases: &r.phases,
                })
                .collect();
            out.table(output::trajectory_table(name, &samples));
            out.table(output::observables_table(name, &samples, p.omega_r));
            let s = summarize(&samples, window);
            if !traj.snapshots.is_empty() {
                let anchors = spectrum::select_anchors(&traj.snapshots, config.spectrum.n_anchors, window)?;
                let file = AnchorFile::new(&anchors, mult.clone(), s.p_stationary);
                if config.scenario == Scenario::Spectrum {
                    let info = spectrum_outputs(config, &file, &mut out)?;
                    spectrum_info = Some(info);
                }
                out.json(format!("{name}_anchors.json"), serde_json::to_string(&file)? + "\n");
            } else if config.scenario == Scenario::Spectrum {
                return Err(Error::Config("spectrum.window exceeds integration.t_end".into()));
            }
            summary = Some(s);
        }
    }

    if config.wants(Format::Json) {
        if let Some(s) = &summary {
            out.json(format!("{name}_summary.json"), serde_json::to_string_pretty(s)? + "\n");
        }
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        code_version: env!("CARGO_PKG_VERSION"),
        name: config.name.clone(),
        scenario: config.scenario.as_str(),
        config: config.clone(),
        stats,
        files: out.entries.clone(),
        regime: Some(regime_check(p)),
        summary,
        spectrum: spectrum_info,
    };
    write_all(output_dir(config, root), format!("{name}_manifest.json"), manifest, out)
}

/// Recomputes the spectrum from the anchors stored next to a run manifest
/// and writes `{name}_spectrum.csv`, `{name}_g1.csv`, `{name}_peaks.json`
/// and `{name}_spectrum_manifest.json` into the same directory.
pub fn spectrum_from_manifest(path: &Path, overrides: &[String]) -> Result<RunReport> {
    let config = RunConfig::load(path, overrides)?;
    let dir = path.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
    let anchor_path = dir.join(format!("{}_anchors.json", config.name));
    let text = std::fs::read_to_string(&anchor_path).map_err(|e| Error::io(&anchor_path, e))?;
    let file: AnchorFile = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", anchor_path.display())))?;
    if file.n_atoms != config.params.n_atoms {
        return Err(Error::Config(format!(
            "{} holds {} atoms, the config {}",
            anchor_path.display(),
            file.n_atoms,
            config.params.n_atoms
        )));
    }
    let mut out = Outputs::new();
    let info = spectrum_outputs(&config, &file, &mut out)?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        code_version: env!("CARGO_PKG_VERSION"),
        name: config.name.clone(),
        scenario: Scenario::Spectrum.as_str(),
        config: config.clone(),
        stats: SolverStats::default(),
        files: out.entries.clone(),
        regime: None,
        summary: None,
        spectrum: Some(info),
    };
    write_all(dir, format!("{}_spectrum_manifest.json", config.name), manifest, out)
}

/// Reads a manifest as a JSON value (for inspection and tests).
pub fn read_manifest(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn spectrum_outputs(config: &RunConfig, file: &AnchorFile, out: &mut Outputs) -> Result<SpectrumInfo> {
    let p = &config.params;
    let anchors = file.states()?;
    let settings = config.spectrum.correlation(config.integration.tolerances());
    let series = spectrum::mean_g1(&anchors, p, &file.multiplicity, &settings)?;
    let mut result = wiener_khinchin(&series.g1, series.dtau, p.delta_a, &config.spectrum.transform())?;
    result.detect_peaks(config.spectrum.min_prominence);
    let central_peak = result
        .peaks
        .iter()
        .copied()
        .max_by(|a, b| a.height.total_cmp(&b.height));
    let name = &config.name;
    out.table(output::spectrum_table(name, &result));
    out.table(output::g1_table(name, &series));
    out.json(format!("{name}_peaks.json"), output::peaks_json(&result.peaks)?);
    Ok(SpectrumInfo {
        meta: result.meta,
        n_anchors: anchors.len(),
        anchor_times: anchors.iter().map(|(t, _)| *t).collect(),
        p_stationary: file.p_stationary,
        predicted_sidebands: file.p_stationary.map(|ps| sideband_frequencies(p.omega_r, ps)),
        central_peak,
    })
}

fn write_all(dir: PathBuf, manifest_file: String, manifest: Manifest, out: Outputs) -> Result<RunReport> {
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    for (entry, body) in out.entries.iter().zip(&out.contents) {
        let path = dir.join(&entry.file);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    let manifest_path = dir.join(manifest_file);
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    std::fs::write(&manifest_path, text).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(RunReport {
        directory: dir,
        manifest_path,
        manifest,
    })
}

fn initial_phases(config: &RunConfig) -> Result<Vec<AtomPhase>> {
    match &config.init.phases {
        Some(ph) => Ok(ph.clone()),
        None => {
            let [lo, hi] = config.init.p_range;
            init_ensemble(config.params.n_atoms, (lo, hi), config.init.seed)
        }
    }
}

fn multiplicity(config: &RunConfig) -> Result<Multiplicity> {
    match &config.init.multiplicity {
        Some(w) => Multiplicity::new(w.clone()),
        None => Ok(Multiplicity::uniform(config.params.n_atoms)),
    }
}

/// Mean `|p̄_m|` over atoms whose window-mean momentum exceeds three
/// standard deviations of its fluctuation and 0.1 ħk, i.e. atoms in steady
/// linear motion. `None` when no atom qualifies.
pub fn p_stationary(mean_p: &[f64], sd_p: &[f64]) -> Option<f64> {
    let moving: Vec<f64> = mean_p
        .iter()
        .zip(sd_p)
        .filter(|(m, s)| m.abs() > 3.0 * **s && m.abs() > 0.1)
        .map(|(m, _)| m.abs())
        .collect();
    (!moving.is_empty()).then(|| moving.iter().sum::<f64>() / moving.len() as f64)
}

/// Late-window averages of a sampled run.
pub fn summarize(samples: &[Sample<'_>], window: f64) -> Summary {
    let t_end = samples.last().map_or(0.0, |s| s.t);
    let t_from = (t_end - window).max(samples.first().map_or(0.0, |s| s.t));
    let late: Vec<&Sample<'_>> = samples.iter().filter(|s| s.t >= t_from).collect();
    let k = late.len().max(1) as f64;
    let mean = |f: &dyn Fn(&Sample<'_>) -> f64| late.iter().map(|s| f(s)).sum::<f64>() / k;
    let n_atoms = samples.first().map_or(0, |s| s.phases.len());
    let mean_p: Vec<f64> = (0..n_atoms).map(|m| mean(&|s| s.phases[m].p)).collect();
    let sd_p: Vec<f64> = (0..n_atoms)
        .map(|m| mean(&|s| (s.phases[m].p - mean_p[m]).powi(2)).sqrt())
        .collect();
    let positive = samples
        .iter()
        .filter(|s| s.observables.inversion.iter().any(|&v| v > 0.0))
        .count();
    Summary {
        window: [t_from, t_end],
        mean_n_photon: mean(&|s| s.observables.n_photon),
        mean_n_laser: mean(&|s| s.observables.n_laser),
        mean_n_scatter: mean(&|s| s.observables.n_scatter),
        positive_inversion_fraction: positive as f64 / samples.len().max(1) as f64,
        max_inversion: samples
            .iter()
            .flat_map(|s| s.observables.inversion.iter().copied())
            .fold(f64::NEG_INFINITY, f64::max),
        p_stationary: p_stationary(&mean_p, &sd_p),
        mean_p,
        sd_p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::Observables;
    use num_complex::Complex64 as C64;

    #[test]
    fn stationary_momentum_needs_steady_motion() {
        assert_eq!(p_stationary(&[2.0, -2.2, 0.3], &[0.1, 0.2, 0.5]), Some(2.1));
        assert_eq!(p_stationary(&[0.05], &[0.0]), None);
        assert_eq!(p_stationary(&[1.0], &[0.5]), None);
    }

    #[test]
    fn summary_over_late_window() {
        let obs: Vec<Observables> = (0..11)
            .map(|k| Observables::new(k as f64, C64::new(0.0, 0.0), vec![if k == 3 { 0.2 } else { -0.5 }]))
            .collect();
        let ph: Vec<[AtomPhase; 1]> = (0..11).map(|_| [AtomPhase::new(0.0, 2.0)]).collect();
        let samples: Vec<Sample<'_>> = (0..11)
            .map(|k| Sample {
                t: k as f64,
                observables: &obs[k],
                phases: &ph[k],
            })
            .collect();
        let s = summarize(&samples, 2.0);
        assert_eq!(s.window, [8.0, 10.0]);
        assert_eq!(s.mean_n_photon, 9.0);
        assert_eq!(s.positive_inversion_fraction, 1.0 / 11.0);
        assert_eq!(s.max_inversion, 0.2);
        assert_eq!(s.p_stationary, Some(2.0));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Error::Config("x".into()).exit_code(), 2);
        assert_eq!(Error::DimensionBudget { dim: 1, cap: 0 }.exit_code(), 3);
        assert_eq!(Error::Positivity { t: 0.0, min_eigenvalue: -1.0 }.exit_code(), 4);
        assert_eq!(Error::Spectrum("x".into()).exit_code(), 1);
    }
}
