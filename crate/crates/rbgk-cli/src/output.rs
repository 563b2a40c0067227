//! Deterministic output files: CSV tables and the run manifest.
//!
//! Floats are printed with `{:.16e}` (17 significant digits), which
//! round-trips f64 exactly, so two runs that compute identical numbers
//! write identical bytes. The manifest records everything needed to
//! replay a run: the SHA-256 of the config file, the library version,
//! the effective seed, the PRNG family, and the tolerances the scenario
//! enforced.

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Every random draw in every scenario comes from this PRNG family.
pub const PRNG_NAME: &str = "ChaCha12";

/// Round-trip exact float formatting for CSV cells.
pub fn fnum(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes one CSV file: a header line, then the prebuilt rows.
pub fn write_csv(
    path: &Path,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> anyhow::Result<()> {
    let mut buf = String::new();
    buf.push_str(header);
    buf.push('\n');
    for row in rows {
        buf.push_str(&row);
        buf.push('\n');
    }
    std::fs::write(path, buf).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    kind: &'a str,
    name: &'a str,
    config_sha256: String,
    library_version: &'static str,
    seed: u64,
    prng: &'static str,
    passed: bool,
    outputs: &'a [String],
    /// BTreeMap so serialization order is stable.
    tolerances: &'a BTreeMap<String, f64>,
}

/// Accumulates a scenario's products; `finish` writes the manifest.
pub struct RunContext {
    pub outdir: PathBuf,
    pub seed: u64,
    config_sha256: String,
    tolerances: BTreeMap<String, f64>,
    outputs: Vec<String>,
}

impl RunContext {
    pub fn new(outdir: &Path, seed: u64, raw_config: &[u8]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(raw_config);
        RunContext {
            outdir: outdir.to_path_buf(),
            seed,
            config_sha256: format!("{:x}", hasher.finalize()),
            tolerances: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    /// Records a tolerance the scenario enforces (lands in the manifest).
    pub fn tolerance(&mut self, key: &str, value: f64) {
        self.tolerances.insert(key.to_string(), value);
    }

    /// Writes a CSV table into the output directory and records it.
    pub fn csv(
        &mut self,
        file: &str,
        header: &str,
        rows: impl IntoIterator<Item = String>,
    ) -> anyhow::Result<()> {
        write_csv(&self.outdir.join(file), header, rows)?;
        self.outputs.push(file.to_string());
        Ok(())
    }

    /// Registers a non-CSV product written by the scenario itself.
    pub fn product(&mut self, file: &str) {
        self.outputs.push(file.to_string());
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.outdir.join(file)
    }

    /// Writes manifest.toml and returns `passed` unchanged.
    pub fn finish(mut self, kind: &str, name: &str, passed: bool) -> anyhow::Result<bool> {
        self.outputs.push("manifest.toml".to_string());
        self.outputs.sort();
        let manifest = Manifest {
            schema_version: crate::config::SCHEMA_VERSION,
            kind,
            name,
            config_sha256: self.config_sha256.clone(),
            library_version: rbgk_core::VERSION,
            seed: self.seed,
            prng: PRNG_NAME,
            passed,
            outputs: &self.outputs,
            tolerances: &self.tolerances,
        };
        let text = toml::to_string_pretty(&manifest).context("manifest serialization")?;
        let path = self.outdir.join("manifest.toml");
        let mut file = std::fs::File::create(&path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        file.write_all(text.as_bytes())?;
        Ok(passed)
    }
}

/// One PASS/FAIL report line; scenarios print these as they check things.
pub fn report(check: &str, value: f64, bound: f64, pass: bool) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("  {check}: {value:.3e} (bound {bound:.3e}) {verdict}");
}
