//! The seven scenario kinds: dispatch, catalog, shared grid helpers.

pub mod bgkrun;
pub mod closure;
pub mod euler;
pub mod lindiag;
pub mod nrlimit;
pub mod semigroup;
pub mod urlimit;

use crate::config::{GridSpec, ScenarioConfig, StateSpec, KINDS};
use crate::output::RunContext;
use anyhow::{bail, Result};
use rbgk_core::juttner::params::JuttnerParams;
use rbgk_core::MomentumGrid;
use std::path::Path;
use std::sync::Arc;

/// Default relative moment tolerance for automatically sized grids.
pub const AUTO_GRID_TOL: f64 = 1e-8;

/// Builds the momentum lattice from a spec; automatic sizing targets the
/// given reference state (the widest one the scenario will place on it).
pub fn build_grid(spec: &GridSpec, beta: f64, speed: f64) -> Result<Arc<MomentumGrid>> {
    let grid = match (spec.cutoff, spec.nodes) {
        (Some(c), Some(n)) => MomentumGrid::new(c, n)?,
        _ => MomentumGrid::sized_for(beta, speed, spec.auto_tol.unwrap_or(AUTO_GRID_TOL))?,
    };
    Ok(Arc::new(grid))
}

pub fn juttner_of(s: &StateSpec) -> Result<JuttnerParams> {
    Ok(JuttnerParams::new(s.density, s.beta, s.velocity)?)
}

pub fn speed_of(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Runs a validated config, writing all products plus the manifest into
/// `outdir`. Returns true iff every enforced check passed.
pub fn run(cfg: &ScenarioConfig, raw_config: &[u8], outdir: &Path, seed: u64) -> Result<bool> {
    println!("scenario `{}` (kind {}) -> {}", cfg.name, cfg.kind, outdir.display());
    let mut ctx = RunContext::new(outdir, seed, raw_config);
    let passed = match cfg.kind.as_str() {
        "closure-verify" => closure::run(cfg, &mut ctx)?,
        "bgk-run" => bgkrun::run(cfg, &mut ctx)?,
        "nr-limit" => nrlimit::run(cfg, &mut ctx)?,
        "ur-limit" => urlimit::run(cfg, &mut ctx)?,
        "euler-limit" => euler::run(cfg, &mut ctx)?,
        "linearized-diag" => lindiag::run(cfg, &mut ctx)?,
        "semigroup" => semigroup::run(cfg, &mut ctx)?,
        other => bail!("unknown scenario kind `{other}`; the catalog has {}", KINDS.join(", ")),
    };
    let passed = ctx.finish(&cfg.kind, &cfg.name, passed)?;
    println!("result: {}", if passed { "PASS" } else { "FAIL" });
    Ok(passed)
}

/// `--verify-only`: runs the certification suite the scenario's
/// guarantees rest on (moment identities, closure convergence, or
/// discrete projector algebra, depending on the kind) without writing
/// anything. Returns true iff certified.
pub fn verify_only(cfg: &ScenarioConfig) -> Result<bool> {
    println!("verify-only for `{}` (kind {})", cfg.name, cfg.kind);
    let passed = match cfg.kind.as_str() {
        "closure-verify" => closure::verify(cfg)?,
        "bgk-run" => bgkrun::verify(cfg)?,
        "nr-limit" => nrlimit::verify(cfg)?,
        "ur-limit" => urlimit::verify(cfg)?,
        "euler-limit" => euler::verify(cfg)?,
        "linearized-diag" => lindiag::verify(cfg)?,
        "semigroup" => semigroup::verify(cfg)?,
        other => bail!("unknown scenario kind `{other}`; the catalog has {}", KINDS.join(", ")),
    };
    println!("verification: {}", if passed { "PASS" } else { "FAIL" });
    Ok(passed)
}

/// The scenario catalog: every kind with its required fields and
/// defaults, as printed by `rbgk list`.
pub fn catalog() -> String {
    let mut out = String::from("scenario kinds (config field `kind`):\n\n");
    for kind in KINDS {
        let body = match kind {
            "closure-verify" => closure::CATALOG,
            "bgk-run" => bgkrun::CATALOG,
            "nr-limit" => nrlimit::CATALOG,
            "ur-limit" => urlimit::CATALOG,
            "euler-limit" => euler::CATALOG,
            "linearized-diag" => lindiag::CATALOG,
            "semigroup" => semigroup::CATALOG,
            _ => unreachable!("catalog entry missing for a declared kind"),
        };
        out.push_str(&format!("kind: {kind}\n{body}\n"));
    }
    out.push_str(
        "common fields: schema_version (=1), kind, name, seed (default 0), \
output_dir (default out/<name>).\n\
[grid]: cutoff + nodes (even), or neither for automatic sizing via \
auto_tol (default 1e-8); x_cells (default 1), length (default 1.0).\n\
All randomness is ChaCha12 seeded from `seed`; outputs are \
byte-for-byte reproducible given (config, seed).\n",
    );
    out
}
