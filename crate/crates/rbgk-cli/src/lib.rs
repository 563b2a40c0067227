//! Configuration-driven front end for the rbgk numerical core.
//!
//! A scenario is a TOML file with a versioned schema: a `kind` choosing
//! one of the seven study types, a momentum-grid spec, physical
//! parameters, and run controls. Running a scenario writes CSV tables,
//! binary field snapshots and a manifest (config hash, library version,
//! seed, PRNG name, enforced tolerances) into one output directory, and
//! the outputs are byte-for-byte reproducible given (config, seed).
//!
//! All randomness flows through ChaCha12 seeded from the config (or the
//! `--seed` override), so runs can be replayed across machines.

pub mod config;
pub mod output;
pub mod scenarios;

use anyhow::{bail, Context};
use std::path::{Path, PathBuf};

/// Flags from the command line that override config fields.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub verify_only: bool,
}

/// Loads, validates and executes one scenario file. Returns true when
/// every check the scenario enforces passed its tolerance.
pub fn run_scenario_file(path: &Path, overrides: &Overrides) -> anyhow::Result<bool> {
    let raw = std::fs::read(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let text = std::str::from_utf8(&raw).context("config file is not UTF-8")?;
    let cfg: config::ScenarioConfig =
        toml::from_str(text).context("config parse error")?;

    let issues = cfg.validate();
    if !issues.is_empty() {
        for issue in &issues {
            eprintln!("config error: {issue}");
        }
        bail!("invalid config: {} problem(s) listed above", issues.len());
    }

    let seed = overrides.seed.unwrap_or(cfg.seed);

    if overrides.verify_only {
        return scenarios::verify_only(&cfg);
    }

    let outdir = overrides
        .output_dir
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    std::fs::create_dir_all(&outdir)
        .with_context(|| format!("cannot create output directory {}", outdir.display()))?;

    scenarios::run(&cfg, &raw, &outdir, seed)
}
