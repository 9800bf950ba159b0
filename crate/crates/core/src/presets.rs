// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

//! Bundled run configurations.

use crate::config::RunConfig;
use crate::error::{Error, Result};

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    json: &'static str,
}

impl Preset {
    pub fn json(&self) -> &'static str {
        self.json
    }

    pub fn config(&self) -> RunConfig {
        RunConfig::from_json(self.json).expect("bundled presets are valid")
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2",
        summary: "single atom, strong monochromatic drive (Ω=30, Δa=−10, ω_r=2.5)",
        json: include_str!("../presets/fig2.json"),
    },
    Preset {
        name: "fig3",
        summary: "single atom, Doppler-like cooling without inversion (Ω=10, Δa=−20, ω_r=6)",
        json: include_str!("../presets/fig3.json"),
    },
    Preset {
        name: "fig5",
        summary: "single atom, bichromatic drive (η=8, Δη=−25)",
        json: include_str!("../presets/fig5.json"),
    },
    Preset {
        name: "fig6",
        summary: "8 atoms, full master equation, |p| in [2, 2.5] at x = mπ",
        json: include_str!("../presets/fig6.json"),
    },
    Preset {
        name: "fig7",
        summary: "100 atoms, cumulant expansion, bichromatic drive",
        json: include_str!("../presets/fig7.json"),
    },
    Preset {
        name: "fig8",
        summary: "cavity output spectrum of the 100-atom ensemble",
        json: include_str!("../presets/fig8.json"),
    },
];

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Config(format!("no preset named {name:?}")))
}
