// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn superlaser(out_root: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superlaser"))
        .args(args)
        .env("SUPERLASER_OUT", out_root)
        .output()
        .expect("binary runs")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const SMALL: &str = r#"{
  "name": "small",
  "scenario": "single-full",
  "params": {
    "kappa": 20.0, "g": 4.0, "omega_drive": 10.0, "delta_a": -20.0, "delta_c": -20.0,
    "eta": 8.0, "delta_eta": -25.0, "omega_r": 6.0, "n_max": 2
  },
  "init": { "phases": [{ "x": 1.0, "p": 2.0 }] },
  "integration": { "t_end": 5.0 },
  "output": { "directory": "runs" }
}"#;

#[test]
fn presets_are_listed() {
    let tmp = tempfile::tempdir().unwrap();
    let out = superlaser(tmp.path(), &["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["fig2", "fig3", "fig5", "fig6", "fig7", "fig8"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from:\n{text}");
    }
    let one = superlaser(tmp.path(), &["presets", "fig5"]);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["params"]["eta"], 8.0);
}

#[test]
fn malformed_config_exits_2_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.json");
    write(&cfg, &SMALL.replace("\"kappa\": 20.0", "\"kappa\": \"twenty\""));
    let out = superlaser(&tmp.path().join("out"), &["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.kappa"));
    assert!(!tmp.path().join("out").exists());

    write(&cfg, &SMALL.replace("\"n_max\": 2", "\"n_max\": 2, \"nmax\": 3"));
    assert_eq!(superlaser(tmp.path(), &["run", cfg.to_str().unwrap()]).status.code(), Some(2));
    let out = superlaser(tmp.path(), &["run", "no-such-config.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("runs").exists());
}

#[test]
fn dimension_budget_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = superlaser(
        tmp.path(),
        &["run", "fig6", "--set", "params.n_atoms=11", "--set", "name=too_big"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(std::fs::read_dir(tmp.path()).unwrap().next().is_none());
}

#[test]
fn outputs_are_deterministic_and_manifest_reruns() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("small.json");
    write(&cfg, SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(superlaser(&a, &["run", cfg.to_str().unwrap()]).status.success());
    assert!(superlaser(&b, &["run", cfg.to_str().unwrap()]).status.success());
    let files = ["small_trajectory.csv", "small_observables.csv", "small_diagnostics.csv", "small_manifest.json"];
    for f in files {
        let (x, y) = (std::fs::read(a.join("runs").join(f)).unwrap(), std::fs::read(b.join("runs").join(f)).unwrap());
        assert_eq!(x, y, "{f} differs");
    }

    let manifest = a.join("runs/small_manifest.json");
    let c = tmp.path().join("c");
    assert!(superlaser(&c, &["run", manifest.to_str().unwrap()]).status.success());
    for f in files {
        assert_eq!(
            std::fs::read(a.join("runs").join(f)).unwrap(),
            std::fs::read(c.join("runs").join(f)).unwrap(),
            "{f} differs after re-running the manifest"
        );
    }

    let header = std::fs::read_to_string(a.join("runs/small_trajectory.csv")).unwrap();
    assert!(header.starts_with("t,x_1,p_1,inv_1\n"));
}

#[test]
fn overrides_reach_the_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("small.json");
    write(&cfg, SMALL);
    let out = superlaser(
        tmp.path(),
        &["run", cfg.to_str().unwrap(), "--set", "params.eta=6.5", "--set", "name=eta65"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("runs/eta65_manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["params"]["eta"], 6.5);
    assert_eq!(m["schema_version"], 1);
    assert!(m["stats"]["steps"].as_u64().unwrap() > 0);
}

#[test]
fn spectrum_command_reproduces_in_process_spectrum() {
    let tmp = tempfile::tempdir().unwrap();
    let out = superlaser(
        tmp.path(),
        &[
            "run",
            "fig8",
            "--set",
            "name=tiny",
            "--set",
            "params.n_atoms=3",
            "--set",
            "integration.t_end=25",
            "--set",
            "spectrum.window=5",
            "--set",
            "spectrum.tau_max=10",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read(tmp.path().join("tiny_spectrum.csv")).unwrap();
    let header = String::from_utf8_lossy(&first[..60]).into_owned();
    assert!(header.starts_with("omega_minus_omega_a,s_normalized,s_raw,omega_frame\n"));
    std::fs::remove_file(tmp.path().join("tiny_spectrum.csv")).unwrap();

    let manifest = tmp.path().join("tiny_manifest.json");
    let out = superlaser(tmp.path(), &["spectrum", manifest.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(tmp.path().join("tiny_spectrum.csv")).unwrap(), first);
    assert!(tmp.path().join("tiny_spectrum_manifest.json").exists());
    let peaks: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("tiny_peaks.json")).unwrap()).unwrap();
    assert!(peaks.as_array().unwrap().iter().all(|p| p.get("fwhm").is_some()));
}

#[test]
fn dressed_profile_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("d.json");
    write(
        &cfg,
        r#"{"name": "d", "scenario": "dressed-profile",
            "params": {"kappa": 20, "g": 4, "omega_drive": 10, "delta_a": -20, "delta_c": -20, "omega_r": 6},
            "profile": {"x_min": 0, "x_max": 3.141592653589793, "points": 3}}"#,
    );
    assert!(superlaser(tmp.path(), &["run", cfg.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(tmp.path().join("d_dressed.csv")).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    // At x = 0 the levels are -Δa/2 ± sqrt(Ω² + Δa²/4).
    assert!((rows[0][1] - (10.0 + 200f64.sqrt())).abs() < 1e-12);
    assert!((rows[0][2] - (10.0 - 200f64.sqrt())).abs() < 1e-12);
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("d_manifest.json")).unwrap()).unwrap();
    assert_eq!(m["regime"]["bad_cavity"]["holds"], true);
}
