// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: strict JSON plus dotted-key overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{AtomPhase, PhysParams};
use crate::ode::Tolerances;
use crate::spectrum::{CorrelationSettings, TransformSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    DressedProfile,
    SingleFull,
    EnsembleFull,
    Cumulant,
    Spectrum,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::DressedProfile => "dressed-profile",
            Scenario::SingleFull => "single-full",
            Scenario::EnsembleFull => "ensemble-full",
            Scenario::Cumulant => "cumulant",
            Scenario::Spectrum => "spectrum",
        }
    }
}

/// Initial conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitConfig {
    pub seed: u64,
    /// Range of `|p|` [ħk]; atoms sit at `x_m = mπ`.
    pub p_range: [f64; 2],
    /// Explicit phase-space points, overriding `seed` and `p_range`.
    pub phases: Option<Vec<AtomPhase>>,
    /// Zero-based indices of atoms that start in the excited state.
    pub excited: Vec<usize>,
    /// Initial photon number (Fock state; full-quantum only).
    pub photons: usize,
    /// Cluster sizes for the cumulant solver.
    pub multiplicity: Option<Vec<u32>>,
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig {
            seed: 1,
            p_range: [2.0, 2.5],
            phases: None,
            excited: Vec::new(),
            photons: 0,
            multiplicity: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegrationConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_end: f64,
    pub sample_dt: f64,
    /// Full-quantum runs abort when an eigenvalue drops below `-positivity_tol`.
    pub positivity_tol: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        let tol = Tolerances::default();
        IntegrationConfig {
            rel_tol: tol.rel_tol,
            abs_tol: tol.abs_tol,
            t_end: 100.0,
            sample_dt: 0.1,
            positivity_tol: 1e-6,
        }
    }
}

impl IntegrationConfig {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances::new(self.rel_tol, self.abs_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub n_anchors: usize,
    /// Anchors are spread over the last `window` time units [1/Γ].
    pub window: f64,
    pub tau_max: f64,
    pub dtau: f64,
    pub freeze_motion: bool,
    pub apodize: bool,
    /// Apodization time; `None` means `tau_max / 3`.
    pub window_time: Option<f64>,
    pub pad_factor: usize,
    /// Peak prominence threshold relative to the spectrum maximum.
    pub min_prominence: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        let c = CorrelationSettings::default();
        SpectrumConfig {
            n_anchors: 8,
            window: 20.0,
            tau_max: c.tau_max,
            dtau: c.dtau,
            freeze_motion: false,
            apodize: true,
            window_time: None,
            pad_factor: 2,
            min_prominence: 0.02,
        }
    }
}

impl SpectrumConfig {
    pub fn correlation(&self, tol: Tolerances) -> CorrelationSettings {
        CorrelationSettings {
            tol,
            tau_max: self.tau_max,
            dtau: self.dtau,
            freeze_motion: self.freeze_motion,
        }
    }

    pub fn transform(&self) -> TransformSettings {
        TransformSettings {
            window_time: self.window_time,
            apodize: self.apodize,
            pad_factor: self.pad_factor,
        }
    }
}

/// Position grid of the dressed-state profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            x_min: 0.0,
            x_max: 2.0 * std::f64::consts::PI,
            points: 401,
        }
    }
}

impl ProfileConfig {
    pub fn grid(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.x_min];
        }
        let step = (self.x_max - self.x_min) / (self.points - 1) as f64;
        (0..self.points).map(|k| self.x_min + step * k as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    /// Adds a JSON summary of plateau averages.
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("."),
            formats: vec![Format::Csv],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub scenario: Scenario,
    pub params: PhysParams,
    #[serde(default)]
    pub init: InitConfig,
    #[serde(default)]
    pub integration: IntegrationConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub profile: ProfileConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} must be finite, got {v}")))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    /// Parses strict JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_value(serde_json::from_str(text).map_err(|e| bad(e.to_string()))?)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let config: RunConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            bad(format!("{path}: {}", e.into_inner()))
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file, or the config embedded in a run manifest.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut value: Value = serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        if let Some(embedded) = value.get("config").filter(|_| value.get("schema_version").is_some()) {
            value = embedded.clone();
        }
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        Self::from_value(value)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(bad(format!("name {:?} must be a non-empty file stem", self.name)));
        }
        self.params.validate().map_err(|e| bad(e.to_string()))?;
        let n = self.params.n_atoms;
        let i = &self.integration;
        check_positive("integration.rel_tol", i.rel_tol)?;
        check_positive("integration.abs_tol", i.abs_tol)?;
        check_positive("integration.sample_dt", i.sample_dt)?;
        check_positive("integration.positivity_tol", i.positivity_tol)?;
        if self.scenario != Scenario::DressedProfile {
            check_positive("integration.t_end", i.t_end)?;
        }
        let init = &self.init;
        for v in init.p_range {
            check_finite("init.p_range", v)?;
        }
        if init.p_range[0] > init.p_range[1] || init.p_range[0] < 0.0 {
            return Err(bad("init.p_range must be [lo, hi] with 0 <= lo <= hi"));
        }
        if let Some(ph) = &init.phases {
            if ph.len() != n {
                return Err(bad(format!("init.phases has {} entries for {n} atoms", ph.len())));
            }
            for p in ph {
                check_finite("init.phases.x", p.x)?;
                check_finite("init.phases.p", p.p)?;
            }
        }
        if let Some(&m) = init.excited.iter().find(|&&m| m >= n) {
            return Err(bad(format!("init.excited index {m} out of range for {n} atoms")));
        }
        if init.photons > self.params.n_max {
            return Err(bad("init.photons exceeds params.n_max"));
        }
        if let Some(mult) = &init.multiplicity {
            if mult.len() != n || mult.contains(&0) {
                return Err(bad("init.multiplicity needs one entry >= 1 per atom"));
            }
        }
        if self.scenario == Scenario::SingleFull && n != 1 {
            return Err(bad("single-full needs params.n_atoms = 1"));
        }
        let s = &self.spectrum;
        check_positive("spectrum.tau_max", s.tau_max)?;
        check_positive("spectrum.dtau", s.dtau)?;
        check_finite("spectrum.window", s.window)?;
        check_finite("spectrum.min_prominence", s.min_prominence)?;
        if s.window < 0.0 || s.n_anchors == 0 || s.pad_factor == 0 {
            return Err(bad("spectrum needs window >= 0, n_anchors >= 1, pad_factor >= 1"));
        }
        if s.tau_max <= s.dtau {
            return Err(bad("spectrum.tau_max must exceed spectrum.dtau"));
        }
        if let Some(tw) = s.window_time {
            check_positive("spectrum.window_time", tw)?;
        }
        if self.scenario == Scenario::Spectrum && s.window > i.t_end {
            return Err(bad("spectrum.window exceeds integration.t_end"));
        }
        let p = &self.profile;
        check_finite("profile.x_min", p.x_min)?;
        check_finite("profile.x_max", p.x_max)?;
        if p.points == 0 || (p.points > 1 && !(p.x_max > p.x_min)) {
            return Err(bad("profile needs points >= 1 and x_max > x_min"));
        }
        if self.output.formats.is_empty() {
            return Err(bad("output.formats must not be empty"));
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.output.formats.contains(&f)
    }
}

/// Applies `key.path=value`; the value is parsed as JSON when possible and
/// taken as a string otherwise. Intermediate objects must exist.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| bad(format!("override {assignment:?} is not key=value")))?;
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(bad(format!("bad override key {path:?}")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let (last, parents) = keys.split_last().expect("split yields at least one key");
    let mut node = root;
    for k in parents {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| bad(format!("override {path:?}: {k:?} is not inside an object")))?;
        node = obj.entry(k.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    node.as_object_mut()
        .ok_or_else(|| bad(format!("override {path:?} does not point into an object")))?
        .insert(last.to_string(), value);
    Ok(())
}
