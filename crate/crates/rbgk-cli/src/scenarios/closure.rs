//! closure-verify: Bessel kernel identities, equilibrium moment
//! identities, closure fixed-point recovery, and the free-energy minimum
//! principle, each against its certified tolerance.

use crate::config::{ScenarioConfig, StateSpec};
use crate::output::{fnum, report, RunContext};
use crate::scenarios::{build_grid, juttner_of, speed_of};
use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rbgk_core::bessel::{bessel_k_scaled, inverse_ratio, ratio_k1k2};
use rbgk_core::juttner::free_energy::free_energy_gap;
use rbgk_core::juttner::verify::equilibrium_identity_residuals;
use rbgk_core::juttner::{fit_equilibrium, JuttnerParams};
use rbgk_core::MomentumGrid;
use std::sync::Arc;

pub const CATALOG: &str = "\
  checks Bessel recurrences, the equilibrium moment-identity battery,
  closure parameter recovery, and the free-energy minimum principle.
  [closure]: states = [{density, beta, velocity, cutoff?, nodes?}, ...]
    (states without their own grid use the shared [grid]);
    identity_tol (1e-7), fit_tol (1e-6), bessel_suite (true),
    free_energy_seeds (0; needs [grid], uses states[0] as envelope),
    free_energy_tol (1e-9).
  outputs: bessel.csv, identities.csv, fits.csv, free_energy.csv.
  exit 0 iff all residuals within tolerance.";

/// Fixed tolerances of the Bessel ladder (identities, not measurements).
pub const BESSEL_RECURRENCE_TOL: f64 = 1e-10;
pub const BESSEL_ROUNDTRIP_TOL: f64 = 1e-8;
/// Log-spaced evaluation points over beta in [1e-3, 1e2].
pub const BESSEL_POINTS: usize = 100;

fn state_grid(cfg: &ScenarioConfig, s: &StateSpec) -> Result<Arc<MomentumGrid>> {
    match (s.cutoff, s.nodes) {
        (Some(c), Some(n)) => Ok(Arc::new(MomentumGrid::new(c, n)?)),
        _ => build_grid(
            cfg.grid.as_ref().expect("validated: shared grid exists"),
            s.beta,
            speed_of(s.velocity),
        ),
    }
}

fn bessel_suite(ctx: &mut RunContext) -> Result<bool> {
    let mut rows = Vec::with_capacity(BESSEL_POINTS);
    let mut worst_recur = 0.0f64;
    let mut worst_round = 0.0f64;
    let mut monotone = true;
    let mut last_ratio = 0.0;
    for i in 0..BESSEL_POINTS {
        let beta = 1e-3 * 1e5f64.powf(i as f64 / (BESSEL_POINTS - 1) as f64);
        let k0 = bessel_k_scaled(0, beta)?;
        let k1 = bessel_k_scaled(1, beta)?;
        let k2 = bessel_k_scaled(2, beta)?;
        // The exp(beta) scaling cancels in the three-term recurrence.
        let recur = (k2 - (2.0 / beta) * k1 - k0).abs() / k2;
        let ratio = ratio_k1k2(beta)?;
        if ratio <= last_ratio || ratio >= 1.0 {
            monotone = false;
        }
        last_ratio = ratio;
        let round = (inverse_ratio(ratio)? - beta).abs() / beta;
        worst_recur = worst_recur.max(recur);
        worst_round = worst_round.max(round);
        rows.push(format!(
            "{},{},{},{}",
            fnum(beta),
            fnum(recur),
            fnum(ratio),
            fnum(round)
        ));
    }
    ctx.csv("bessel.csv", "beta,recurrence_rel,ratio,roundtrip_rel", rows)?;

    let pass = worst_recur <= BESSEL_RECURRENCE_TOL
        && worst_round <= BESSEL_ROUNDTRIP_TOL
        && monotone;
    report("bessel recurrence", worst_recur, BESSEL_RECURRENCE_TOL, worst_recur <= BESSEL_RECURRENCE_TOL);
    report("bessel round-trip", worst_round, BESSEL_ROUNDTRIP_TOL, worst_round <= BESSEL_ROUNDTRIP_TOL);
    println!("  bessel ratio monotone in (0, 1): {}", if monotone { "PASS" } else { "FAIL" });
    Ok(pass)
}

/// Relative recovery errors of one fit against the sampled truth.
fn fit_errors(truth: &JuttnerParams, fitted: &JuttnerParams) -> (f64, f64, f64) {
    let dn = (fitted.density - truth.density).abs() / truth.density;
    let db = (fitted.beta - truth.beta).abs() / truth.beta;
    let mut du2 = 0.0;
    let mut u2 = 0.0;
    for d in 0..3 {
        du2 += (fitted.velocity[d] - truth.velocity[d]).powi(2);
        u2 += truth.velocity[d].powi(2);
    }
    // Relative to |u| when the state drifts, absolute when at rest.
    let du = if u2 > 0.0 { (du2 / u2).sqrt() } else { du2.sqrt() };
    (dn, db, du)
}

pub fn run(cfg: &ScenarioConfig, ctx: &mut RunContext) -> Result<bool> {
    let c = cfg.closure.as_ref().expect("validated");
    ctx.tolerance("identity_tol", c.identity_tol);
    ctx.tolerance("fit_tol", c.fit_tol);
    let mut passed = true;

    if c.bessel_suite {
        ctx.tolerance("bessel_recurrence_tol", BESSEL_RECURRENCE_TOL);
        ctx.tolerance("bessel_roundtrip_tol", BESSEL_ROUNDTRIP_TOL);
        passed &= bessel_suite(ctx)?;
    }

    let mut identity_rows = Vec::with_capacity(c.states.len());
    let mut fit_rows = Vec::with_capacity(c.states.len());
    let mut worst_identity = 0.0f64;
    let mut worst_fit = 0.0f64;
    for (i, s) in c.states.iter().enumerate() {
        let grid = state_grid(cfg, s)?;
        let params = juttner_of(s)?;

        let r = equilibrium_identity_residuals(&grid, &params)?;
        worst_identity = worst_identity.max(r.max_all());
        identity_rows.push(format!(
            "{i},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fnum(s.density),
            fnum(s.beta),
            fnum(speed_of(s.velocity)),
            fnum(grid.cutoff()),
            grid.size(),
            fnum(r.current[0]),
            fnum(r.current[1]),
            fnum(r.current[2]),
            fnum(r.current[3]),
            fnum(r.density),
            fnum(r.energy),
            fnum(r.pressure),
            fnum(r.alpha),
            fnum(r.stress),
            fnum(r.entropy_scalar),
            fnum(r.entropy_time),
            fnum(r.entropy_space)
        ));

        let f = params.sample_on(&grid)?;
        let out = fit_equilibrium(&grid, &f)?;
        let (dn, db, du) = fit_errors(&params, &out.params);
        worst_fit = worst_fit.max(dn).max(db).max(du);
        fit_rows.push(format!(
            "{i},{},{},{},{},{}",
            out.iterations,
            fnum(out.residual),
            fnum(dn),
            fnum(db),
            fnum(du)
        ));
    }
    ctx.csv(
        "identities.csv",
        "state,density,beta,speed,cutoff,nodes,current_t,current_x,current_y,current_z,\
density_rel,energy_rel,pressure_rel,alpha_rel,stress_rel,entropy_scalar_rel,\
entropy_time_rel,entropy_space_rel",
        identity_rows,
    )?;
    ctx.csv("fits.csv", "state,iterations,moment_residual,density_rel,beta_rel,velocity_rel", fit_rows)?;
    report("moment identities", worst_identity, c.identity_tol, worst_identity <= c.identity_tol);
    report("closure recovery", worst_fit, c.fit_tol, worst_fit <= c.fit_tol);
    passed &= worst_identity <= c.identity_tol && worst_fit <= c.fit_tol;

    if c.free_energy_seeds > 0 {
        ctx.tolerance("free_energy_tol", c.free_energy_tol);
        let envelope_state = juttner_of(&c.states[0])?;
        let grid = build_grid(
            cfg.grid.as_ref().expect("validated"),
            envelope_state.beta,
            speed_of(envelope_state.velocity),
        )?;
        let envelope = envelope_state.sample_on(&grid)?;
        let mut rows = Vec::with_capacity(c.free_energy_seeds);
        let mut worst_gap = f64::INFINITY;
        for s in 0..c.free_energy_seeds {
            let mut rng = ChaCha12Rng::seed_from_u64(ctx.seed + s as u64);
            let f: Vec<f64> =
                envelope.iter().map(|&j| j * (0.2 + 1.6 * rng.random::<f64>())).collect();
            let out = fit_equilibrium(&grid, &f)?;
            let gap = free_energy_gap(&grid, &f, &out.equilibrium, out.params.velocity)?;
            worst_gap = worst_gap.min(gap);
            rows.push(format!("{s},{}", fnum(gap)));
        }
        ctx.csv("free_energy.csv", "seed,gap", rows)?;
        let ok = worst_gap >= -c.free_energy_tol;
        report("free-energy gap (min)", worst_gap, -c.free_energy_tol, ok);
        passed &= ok;
    }

    Ok(passed)
}

/// Certification: the identity battery itself (this kind's purpose), so
/// verify-only is a dry run of the core check without file output.
pub fn verify(cfg: &ScenarioConfig) -> Result<bool> {
    let c = cfg.closure.as_ref().expect("validated");
    let mut passed = true;
    for (i, s) in c.states.iter().enumerate() {
        let grid = state_grid(cfg, s)?;
        let params = juttner_of(s)?;
        let worst = equilibrium_identity_residuals(&grid, &params)?.max_all();
        let ok = worst <= c.identity_tol;
        report(&format!("state {i} identities"), worst, c.identity_tol, ok);
        passed &= ok;
    }
    Ok(passed)
}
