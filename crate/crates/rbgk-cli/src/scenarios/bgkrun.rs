//! bgk-run: split-step relaxation/transport runs with the per-step
//! conservation ledger, optional macroscopic history, and a final
//! snapshot.

use crate::config::{RunSection, ScenarioConfig};
use crate::output::{fnum, report, RunContext};
use crate::scenarios::{build_grid, juttner_of, speed_of};
use anyhow::Result;
use rbgk_core::bgk::init::{equilibrium_column, homogeneous, smooth_wave_profile, two_beam};
use rbgk_core::bgk::Splitting;
use rbgk_core::juttner::fit::{fit_equilibrium, CLOSURE_TOL};
use rbgk_core::juttner::JuttnerParams;
use rbgk_core::phase::snapshot::save_field;
use rbgk_core::{BgkRunConfig, CollisionMode, ConservationLedger, KineticField1d, MomentumGrid};
use std::sync::Arc;

pub const CATALOG: &str = "\
  integrates the relaxation model (upwind transport + local collisions)
  and audits conservation and entropy step by step.
  [run]: epsilon, dt, t_end; cadence (0), collision (linear|exponential,
    default linear), splitting (lie|strang, default lie), cfl_limit (1.0),
    conservation_tol (1e-8 in linear mode), step_drift_tol
    (1.3e-12 in exponential mode), entropy_rise_tol (1e-12).
  [init]: kind = two-beam (two [[init.beams]], x_cells = 1)
    or wave-column (built-in smooth profile, x_cells >= 2).
  [grid]: required; shared by all initial states.
  outputs: ledger.csv, macro.csv (cadence > 0), summary.csv, final.rbgkf.";

/// Default whole-run conservation bound for the exactly conservative
/// linear mode.
pub const LINEAR_CONSERVATION_TOL: f64 = 1e-8;

/// Default per-step drift bound for exponential mode: ten times the
/// closure tolerance.
pub fn exponential_step_tol() -> f64 {
    10.0 * CLOSURE_TOL
}

fn collision_of(r: &RunSection) -> CollisionMode {
    match r.collision.as_str() {
        "linear" => CollisionMode::Linear,
        _ => CollisionMode::Exponential,
    }
}

fn splitting_of(r: &RunSection) -> Splitting {
    match r.splitting.as_str() {
        "lie" => Splitting::Lie,
        _ => Splitting::Strang,
    }
}

/// The states the run grid must support: beams, or the wave profile
/// sampled at every cell center.
fn init_states(cfg: &ScenarioConfig) -> Result<Vec<JuttnerParams>> {
    let init = cfg.init.as_ref().expect("validated");
    let grid_spec = cfg.grid.as_ref().expect("validated");
    Ok(match init.kind.as_str() {
        "two-beam" => init.beams.iter().map(juttner_of).collect::<Result<Vec<_>>>()?,
        _ => (0..grid_spec.x_cells)
            .map(|c| smooth_wave_profile((c as f64 + 0.5) * grid_spec.length / grid_spec.x_cells as f64))
            .collect(),
    })
}

/// Widest support requirement over the initial states: hottest (smallest
/// beta) and fastest.
fn grid_reference(states: &[JuttnerParams]) -> (f64, f64) {
    let beta = states.iter().map(|s| s.beta).fold(f64::INFINITY, f64::min);
    let speed = states.iter().map(|s| speed_of(s.velocity)).fold(0.0, f64::max);
    (beta, speed)
}

fn initial_field(cfg: &ScenarioConfig, grid: &Arc<MomentumGrid>) -> Result<KineticField1d> {
    let init = cfg.init.as_ref().expect("validated");
    let spec = cfg.grid.as_ref().expect("validated");
    Ok(match init.kind.as_str() {
        "two-beam" => {
            let a = juttner_of(&init.beams[0])?;
            let b = juttner_of(&init.beams[1])?;
            homogeneous(&two_beam(grid, &a, &b)?)?
        }
        _ => equilibrium_column(grid, spec.x_cells, spec.length, smooth_wave_profile)?,
    })
}

/// Largest single-step relative drift of the five conserved totals,
/// scaled by the initial totals (momentum by max(|p0|, mass0) so a
/// symmetric state does not divide by zero).
fn max_step_drift(ledger: &ConservationLedger) -> f64 {
    let rows = &ledger.rows;
    let mut worst = 0.0f64;
    for w in rows.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        worst = worst.max((next.mass - prev.mass).abs() / rows[0].mass);
        worst = worst.max((next.energy - prev.energy).abs() / rows[0].energy);
        for d in 0..3 {
            let scale = rows[0].momentum[d].abs().max(rows[0].mass);
            worst = worst.max((next.momentum[d] - prev.momentum[d]).abs() / scale);
        }
    }
    worst
}

pub fn run(cfg: &ScenarioConfig, ctx: &mut RunContext) -> Result<bool> {
    let r = cfg.run.as_ref().expect("validated");
    let states = init_states(cfg)?;
    let (beta, speed) = grid_reference(&states);
    let grid = build_grid(cfg.grid.as_ref().expect("validated"), beta, speed)?;
    let f0 = initial_field(cfg, &grid)?;

    let config = BgkRunConfig {
        epsilon: r.epsilon,
        dt: r.dt,
        t_end: r.t_end,
        cfl_limit: r.cfl_limit,
        collision: collision_of(r),
        splitting: splitting_of(r),
        output_every: r.cadence,
    };
    config.validate(&f0)?;
    let traj = rbgk_core::bgk_evolve(f0, &config)?;

    let ledger_rows: Vec<String> = traj
        .ledger
        .rows
        .iter()
        .map(|row| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                fnum(row.time),
                fnum(row.mass),
                fnum(row.energy),
                fnum(row.momentum[0]),
                fnum(row.momentum[1]),
                fnum(row.momentum[2]),
                fnum(row.entropy_h),
                fnum(row.min_value),
                row.clamped
            )
        })
        .collect();
    ctx.csv(
        "ledger.csv",
        "time,mass,energy,momentum_x,momentum_y,momentum_z,entropy_h,min_value,clamped",
        ledger_rows,
    )?;

    if r.cadence > 0 {
        let dx = traj.final_field.dx();
        let mut rows = Vec::new();
        for (time, cells) in &traj.macro_states {
            for (c, m) in cells.iter().enumerate() {
                rows.push(format!(
                    "{},{c},{},{},{},{},{},{}",
                    fnum(*time),
                    fnum((c as f64 + 0.5) * dx),
                    fnum(m.density),
                    fnum(m.beta),
                    fnum(m.velocity[0]),
                    fnum(m.velocity[1]),
                    fnum(m.velocity[2])
                ));
            }
        }
        ctx.csv("macro.csv", "time,cell,x,density,beta,u_x,u_y,u_z", rows)?;
    }

    save_field(ctx.path("final.rbgkf"), &traj.final_field)?;
    ctx.product("final.rbgkf");

    // Mode-appropriate audits: total drift for the exactly conservative
    // linear update, per-step drift for the exponential one do the
    // certifying; the entropy bound applies to both.
    let total_drift = traj.ledger.max_relative_drift();
    let step_drift = max_step_drift(&traj.ledger);
    let rise = traj.ledger.max_entropy_rise();
    let steps = traj.ledger.rows.len() - 1;
    ctx.csv(
        "summary.csv",
        "steps,max_relative_drift,max_step_drift,max_entropy_rise,total_clamped",
        [format!(
            "{steps},{},{},{},{}",
            fnum(total_drift),
            fnum(step_drift),
            fnum(rise),
            traj.ledger.total_clamped()
        )],
    )?;

    let mut passed = true;
    let conservation_tol = r.conservation_tol.or_else(|| {
        matches!(collision_of(r), CollisionMode::Linear).then_some(LINEAR_CONSERVATION_TOL)
    });
    if let Some(tol) = conservation_tol {
        ctx.tolerance("conservation_tol", tol);
        let ok = total_drift <= tol;
        report("conservation drift", total_drift, tol, ok);
        passed &= ok;
    } else {
        println!("  conservation drift: {total_drift:.3e} (reported, not enforced)");
    }
    let step_tol = r.step_drift_tol.or_else(|| {
        matches!(collision_of(r), CollisionMode::Exponential).then_some(exponential_step_tol())
    });
    if let Some(tol) = step_tol {
        ctx.tolerance("step_drift_tol", tol);
        let ok = step_drift <= tol;
        report("per-step drift", step_drift, tol, ok);
        passed &= ok;
    } else {
        println!("  per-step drift: {step_drift:.3e} (reported, not enforced)");
    }
    ctx.tolerance("entropy_rise_tol", r.entropy_rise_tol);
    let ok = rise <= r.entropy_rise_tol;
    report("entropy rise", rise, r.entropy_rise_tol, ok);
    passed &= ok;

    Ok(passed)
}

/// Certification: the run's guarantees rest on the discrete closure
/// converging to machine tolerance on this grid for the states the run
/// starts from, so that is what gets verified.
pub fn verify(cfg: &ScenarioConfig) -> Result<bool> {
    let states = init_states(cfg)?;
    let (beta, speed) = grid_reference(&states);
    let grid = build_grid(cfg.grid.as_ref().expect("validated"), beta, speed)?;
    let mut passed = true;
    for (i, params) in states.iter().enumerate() {
        let f = params.sample_on(&grid)?;
        match fit_equilibrium(&grid, &f) {
            Ok(out) => {
                let ok = out.residual <= CLOSURE_TOL;
                report(&format!("state {i} closure residual"), out.residual, CLOSURE_TOL, ok);
                passed &= ok;
            }
            Err(e) => {
                println!("  state {i} closure fit: FAIL ({e})");
                passed = false;
            }
        }
    }
    Ok(passed)
}
