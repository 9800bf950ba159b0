// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use superlaser::config::RunConfig;
use superlaser::run::{self, RunReport};
use superlaser::{presets, Error, Result};

/// Simulate a superradiant laser whose gain comes from light forces.
#[derive(Parser)]
#[command(name = "superlaser", version)]
struct Cli {
    /// Worker threads for parallel correlation runs (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config file, a run manifest, or a bundled preset by name.
    Run {
        config: String,
        /// Override a config value, e.g. `--set params.eta=6`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// List bundled presets, or print one as JSON.
    Presets { name: Option<String> },
    /// Recompute the spectrum from the anchors of a finished cumulant run.
    Spectrum {
        manifest: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

fn load(spec: &str, overrides: &[String]) -> Result<RunConfig> {
    let path = Path::new(spec);
    if path.exists() {
        return RunConfig::load(path, overrides);
    }
    let preset = presets::find(spec)
        .map_err(|_| Error::Config(format!("{spec}: no such file or preset")))?;
    let mut value = serde_json::from_str(preset.json())?;
    for o in overrides {
        superlaser::config::apply_override(&mut value, o)?;
    }
    RunConfig::from_value(value)
}

fn report(r: &RunReport) {
    for p in r.paths() {
        println!("{}", p.display());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Run { config, set } => load(&config, &set)
            .and_then(|c| run::execute(&c, run::output_root_from_env().as_deref()))
            .map(|r| report(&r)),
        Command::Presets { name: None } => {
            for p in presets::PRESETS {
                println!("{:<6} {}", p.name, p.summary);
            }
            Ok(())
        }
        Command::Presets { name: Some(n) } => presets::find(&n).map(|p| print!("{}", p.json())),
        Command::Spectrum { manifest, set } => run::spectrum_from_manifest(&manifest, &set).map(|r| report(&r)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
