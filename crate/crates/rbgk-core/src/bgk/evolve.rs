//! The split-step driver with its conservation ledger.

use super::relax::relax_step;
use super::transport::transport_step;
use super::{BgkRunConfig, Splitting, NEGATIVITY_ABORT};
use crate::error::{Error, Result};
use crate::phase::field::KineticField1d;
use crate::phase::moments::{self, MacroState};
use rayon::prelude::*;

/// Global totals recorded after one step (or for the initial state).
#[derive(Debug, Clone, Copy)]
pub struct LedgerRow {
    pub time: f64,
    /// integral integral f dq dx.
    pub mass: f64,
    /// integral integral q^0 f dq dx.
    pub energy: f64,
    /// integral integral q f dq dx.
    pub momentum: [f64; 3],
    /// H = integral integral f ln f dq dx.
    pub entropy_h: f64,
    pub min_value: f64,
    /// Number of values clamped from (NEGATIVITY_ABORT, 0) to 0 this step.
    pub clamped: u64,
}

/// Per-step history of the conserved totals and the entropy functional.
#[derive(Debug, Clone, Default)]
pub struct ConservationLedger {
    pub rows: Vec<LedgerRow>,
}

impl ConservationLedger {
    /// Largest relative drift of (mass, energy, momentum components) from
    /// the initial row; momentum components are scaled by the larger of
    /// their own initial magnitude and the initial mass.
    pub fn max_relative_drift(&self) -> f64 {
        let Some(first) = self.rows.first() else {
            return 0.0;
        };
        let mut worst = 0.0f64;
        for row in &self.rows[1..] {
            worst = worst.max((row.mass - first.mass).abs() / first.mass.abs());
            worst = worst.max((row.energy - first.energy).abs() / first.energy.abs());
            for d in 0..3 {
                let scale = first.momentum[d].abs().max(first.mass.abs());
                worst = worst.max((row.momentum[d] - first.momentum[d]).abs() / scale);
            }
        }
        worst
    }

    /// Worst per-step entropy increase (positive means H went up).
    pub fn max_entropy_rise(&self) -> f64 {
        self.rows
            .windows(2)
            .map(|w| w[1].entropy_h - w[0].entropy_h)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn total_clamped(&self) -> u64 {
        self.rows.iter().map(|r| r.clamped).sum()
    }
}

/// Result of a run: the ledger, macroscopic states at the configured
/// cadence, and the final kinetic state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub ledger: ConservationLedger,
    /// (time, one MacroState per cell) at the output cadence.
    pub macro_states: Vec<(f64, Vec<MacroState>)>,
    pub final_field: KineticField1d,
}

fn ledger_row(f: &KineticField1d, time: f64, clamped: u64) -> LedgerRow {
    let grid = f.grid();
    let cells = f.x_cells();
    let dx = f.dx();
    let sums: Vec<[f64; 6]> = (0..cells)
        .into_par_iter()
        .map(|c| {
            moments::field_sums::<6>(grid, f.cell(c), |q, q0, v| {
                [
                    v,
                    q0 * v,
                    q[0] * v,
                    q[1] * v,
                    q[2] * v,
                    if v > 0.0 { v * v.ln() } else { 0.0 },
                ]
            })
        })
        .collect();
    let mut total = [0.0; 6];
    for s in sums {
        for k in 0..6 {
            total[k] += s[k];
        }
    }
    LedgerRow {
        time,
        mass: total[0] * dx,
        energy: total[1] * dx,
        momentum: [total[2] * dx, total[3] * dx, total[4] * dx],
        entropy_h: total[5] * dx,
        min_value: f.min_value(),
        clamped,
    }
}

/// Scans for negative values: clamps roundoff debris in
/// (NEGATIVITY_ABORT, 0) to zero and fails on anything below it.
fn enforce_positivity(f: &mut KineticField1d, time: f64) -> Result<u64> {
    let mut clamped = 0u64;
    let mut worst = 0.0f64;
    for v in f.values_mut() {
        if *v < 0.0 {
            if *v > NEGATIVITY_ABORT {
                *v = 0.0;
                clamped += 1;
            } else {
                worst = worst.min(*v);
            }
        }
    }
    if worst < 0.0 {
        return Err(Error::Scheme(format!(
            "negative value {worst:.6e} below the abort threshold {NEGATIVITY_ABORT:e} at t = {time}"
        )));
    }
    Ok(clamped)
}

fn macro_states(f: &KineticField1d) -> Result<Vec<MacroState>> {
    (0..f.x_cells())
        .map(|c| moments::macro_from_f(f.grid(), f.cell(c)))
        .collect()
}

/// Runs the split-step integration from `f0` to `config.t_end`.
///
/// Every step appends a ledger row; macroscopic per-cell states are
/// recorded every `output_every` steps (and at t = 0 and the end) when the
/// cadence is nonzero.
pub fn bgk_evolve(f0: KineticField1d, config: &BgkRunConfig) -> Result<Trajectory> {
    config.validate(&f0)?;
    let mut f = f0;
    let mut ledger = ConservationLedger::default();
    let mut macro_hist = Vec::new();
    ledger.rows.push(ledger_row(&f, 0.0, 0));
    if config.output_every > 0 {
        macro_hist.push((0.0, macro_states(&f)?));
    }

    // Fixing the step count up front keeps run lengths deterministic:
    // accumulating `time += dt` can otherwise undershoot t_end by roundoff
    // and trigger a spurious trailing micro-step. A t_end within 1e-9
    // relative of a whole number of steps is treated as exact.
    let steps = (config.t_end / config.dt - 1e-9).ceil().max(1.0) as usize;
    let mut time = 0.0;
    for step in 1..=steps {
        let last = step == steps;
        let dt = if last { (config.t_end - time).min(config.dt) } else { config.dt };
        match config.splitting {
            Splitting::Lie => {
                transport_step(&mut f, dt)?;
                relax_step(&mut f, dt, config.epsilon, config.collision)?;
            }
            Splitting::Strang => {
                transport_step(&mut f, 0.5 * dt)?;
                relax_step(&mut f, dt, config.epsilon, config.collision)?;
                transport_step(&mut f, 0.5 * dt)?;
            }
        }
        time = if last { config.t_end } else { time + dt };
        let clamped = enforce_positivity(&mut f, time)?;
        ledger.rows.push(ledger_row(&f, time, clamped));
        if config.output_every > 0 && step % config.output_every == 0 {
            macro_hist.push((time, macro_states(&f)?));
        }
    }
    if config.output_every > 0
        && macro_hist.last().map(|(t, _)| *t) != Some(time)
    {
        macro_hist.push((time, macro_states(&f)?));
    }
    Ok(Trajectory { ledger, macro_states: macro_hist, final_field: f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bgk::CollisionMode;
    use crate::juttner::params::JuttnerParams;
    use crate::phase::grid::MomentumGrid;
    use std::sync::Arc;

    fn config(dt: f64, t_end: f64, mode: CollisionMode) -> BgkRunConfig {
        BgkRunConfig {
            epsilon: 1.0,
            dt,
            t_end,
            cfl_limit: 0.9,
            collision: mode,
            splitting: crate::bgk::Splitting::Lie,
            output_every: 4,
        }
    }

    #[test]
    fn global_equilibrium_is_stationary() {
        let grid = Arc::new(MomentumGrid::new(11.0, 20).unwrap());
        let p = JuttnerParams::new(1.0, 1.8, [0.15, 0.0, -0.1]).unwrap();
        let j = p.sample_on(&grid).unwrap();
        let cells = 6;
        let mut f0 = KineticField1d::zeros(Arc::clone(&grid), cells, 1.0).unwrap();
        for c in 0..cells {
            f0.cell_mut(c).copy_from_slice(&j);
        }
        let dt = 0.8 * f0.dx();
        let traj = bgk_evolve(f0, &config(dt, 12.0 * dt, CollisionMode::Exponential)).unwrap();
        let peak = j.iter().copied().fold(0.0f64, f64::max);
        for c in 0..cells {
            for (a, b) in traj.final_field.cell(c).iter().zip(&j) {
                assert!((a - b).abs() < 1e-11 * peak);
            }
        }
    }

    #[test]
    fn homogeneous_two_beam_decays_with_h_monotone() {
        let grid = Arc::new(MomentumGrid::new(13.0, 24).unwrap());
        let a = JuttnerParams::new(0.8, 1.6, [0.4, 0.0, 0.0]).unwrap();
        let b = JuttnerParams::new(0.7, 2.3, [-0.3, 0.2, 0.0]).unwrap();
        let fa = a.sample_on(&grid).unwrap();
        let fb = b.sample_on(&grid).unwrap();
        let mut f0 = KineticField1d::zeros(Arc::clone(&grid), 1, 1.0).unwrap();
        for (o, (x, y)) in f0.cell_mut(0).iter_mut().zip(fa.iter().zip(&fb)) {
            *o = x + y;
        }
        let mut cfg = config(0.1, 5.0, CollisionMode::Linear);
        cfg.epsilon = 0.1;
        let traj = bgk_evolve(f0, &cfg).unwrap();
        assert!(traj.ledger.max_relative_drift() < 1e-11);
        assert!(traj.ledger.max_entropy_rise() <= 1e-12);
        // The state relaxes: the final gap to equilibrium is tiny.
        let out = crate::juttner::fit::fit_equilibrium(&grid, traj.final_field.cell(0)).unwrap();
        let gap = crate::juttner::free_energy::free_energy_gap(
            &grid,
            traj.final_field.cell(0),
            &out.equilibrium,
            out.params.velocity,
        )
        .unwrap();
        let first_gap = {
            let f0v = {
                let mut v = fa.clone();
                for (o, y) in v.iter_mut().zip(&fb) {
                    *o += y;
                }
                v
            };
            let o0 = crate::juttner::fit::fit_equilibrium(&grid, &f0v).unwrap();
            crate::juttner::free_energy::free_energy_gap(
                &grid,
                &f0v,
                &o0.equilibrium,
                o0.params.velocity,
            )
            .unwrap()
        };
        // Far-tail nodes relax at rate 1/q^0 and so dominate the residual.
        assert!(gap < 1e-5 * first_gap, "gap {gap:.3e} vs initial {first_gap:.3e}");
    }

    #[test]
    fn transport_run_conserves_and_dissipates() {
        let grid = Arc::new(MomentumGrid::new(9.0, 12).unwrap());
        let f0 = KineticField1d::from_fn(Arc::clone(&grid), 24, 1.0, |x, q, q0| {
            let p = JuttnerParams::new(
                1.0 + 0.2 * (2.0 * std::f64::consts::PI * x).sin(),
                2.0,
                [0.1, 0.0, 0.0],
            )
            .unwrap();
            p.sampler().unwrap().value(q, q0) * (1.0 + 0.0 * q0)
        })
        .unwrap();
        let dt = 0.5 * f0.dx();
        let traj = bgk_evolve(f0, &config(dt, 40.0 * dt, CollisionMode::Linear)).unwrap();
        // Mass and momentum are conserved by both sub-steps in linear mode.
        assert!(traj.ledger.max_relative_drift() < 1e-11, "drift {:.3e}",
            traj.ledger.max_relative_drift());
        assert!(traj.ledger.max_entropy_rise() <= 1e-12);
        assert!(traj.ledger.total_clamped() == 0);
        assert!(!traj.macro_states.is_empty());
    }

    #[test]
    fn strang_matches_lie_to_first_order_and_runs() {
        let grid = Arc::new(MomentumGrid::new(9.0, 12).unwrap());
        let f0 = KineticField1d::from_fn(Arc::clone(&grid), 16, 1.0, |x, q, q0| {
            let p = JuttnerParams::new(
                1.0 + 0.15 * (2.0 * std::f64::consts::PI * x).cos(),
                1.5,
                [0.0, 0.0, 0.0],
            )
            .unwrap();
            p.sampler().unwrap().value(q, q0)
        })
        .unwrap();
        let dt = 0.5 * f0.dx();
        let mut cfg = config(dt, 10.0 * dt, CollisionMode::Exponential);
        cfg.splitting = crate::bgk::Splitting::Strang;
        let t_strang = bgk_evolve(f0.clone(), &cfg).unwrap();
        cfg.splitting = crate::bgk::Splitting::Lie;
        let t_lie = bgk_evolve(f0, &cfg).unwrap();
        let diff: f64 = t_strang
            .final_field
            .values()
            .iter()
            .zip(t_lie.final_field.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let peak = t_lie.final_field.values().iter().copied().fold(0.0f64, f64::max);
        assert!(diff > 0.0, "the two splittings should differ");
        assert!(diff < 0.05 * peak, "but only at the splitting-error scale");
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let grid = Arc::new(MomentumGrid::new(5.0, 8).unwrap());
        let f0 = KineticField1d::zeros(Arc::clone(&grid), 8, 1.0).unwrap();
        let mut cfg = config(1.0, 1.0, CollisionMode::Exponential);
        assert!(cfg.validate(&f0).is_err()); // dt > cfl * dx
        cfg.dt = 0.05;
        assert!(cfg.validate(&f0).is_ok());
        cfg.dt = -0.05;
        assert!(cfg.validate(&f0).is_err());
        cfg.dt = 0.05;
        cfg.cfl_limit = 1.5;
        assert!(cfg.validate(&f0).is_err());
    }
}
