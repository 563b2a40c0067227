//! The fast-collision regime: macroscopic fields of kinetic runs obey
//! the relativistic Euler system up to a residual that shrinks with the
//! relaxation time.
//!
//! The residual of the three balance laws is measured directly on
//! macroscopic snapshots of the kinetic solver (an independent fluid
//! solver is out of scope): time derivatives from two consecutive
//! snapshots, space derivatives from centered differences of the
//! time-averaged fluxes, so the stencil error is O(dt^2 + dx^2) at the
//! step midpoint. The entropy inequality is audited in the
//! scheme-consistent per-cell form (cell entropy change plus upwind
//! entropy-flux divergence), which the split scheme satisfies step by
//! step up to roundoff.

use crate::bessel::ScalarKernels;
use crate::bgk::init::{equilibrium_column, smooth_wave_profile};
use crate::bgk::relax::{relax_step, CollisionMode};
use crate::bgk::transport::{transport_step, upwind_entropy_flux};
use crate::error::{Error, Result};
use crate::phase::field::KineticField1d;
use crate::phase::grid::MomentumGrid;
use crate::phase::moments::{self, kinetic_entropy, MacroState};
use std::sync::Arc;

/// Max-over-cells residuals of one snapshot pair.
#[derive(Debug, Clone, Copy)]
pub struct EulerResidualRow {
    /// Particle balance: d_t (n gamma) + d_x (n u).
    pub continuity: f64,
    /// Energy balance: d_t (n chi gamma^2 - p) + d_x (n chi u gamma).
    pub energy: f64,
    /// Momentum balance: d_t (n chi u gamma) + d_x (p + n chi u^2).
    pub momentum: f64,
    /// Signed max of d_t (n gamma s) + d_x (n u s) with
    /// s = ln(n / M(beta)) - beta Psi(beta); nonpositive in the limit.
    pub entropy_lhs_max: f64,
}

/// Conserved densities and fluxes of one macroscopic row.
struct FluidQuantities {
    a: [Vec<f64>; 4],
    f: [Vec<f64>; 4],
}

fn fluid_quantities(states: &[MacroState]) -> Result<FluidQuantities> {
    let cells = states.len();
    let mut a = [(); 4].map(|_| vec![0.0; cells]);
    let mut f = [(); 4].map(|_| vec![0.0; cells]);
    for (c, st) in states.iter().enumerate() {
        if !(st.beta > 0.0 && st.density > 0.0) {
            return Err(Error::NonPhysical(format!(
                "cell {c} has n = {}, beta = {}",
                st.density, st.beta
            )));
        }
        let k = ScalarKernels::new(st.beta)?;
        let n = st.density;
        let u = st.velocity[0];
        let gamma = st.gamma();
        let p = n / st.beta;
        let nchi = n * k.chi;
        let s = n.ln() - k.ln_norm - st.beta * k.psi;
        a[0][c] = n * gamma;
        f[0][c] = n * u;
        a[1][c] = nchi * gamma * gamma - p;
        f[1][c] = nchi * u * gamma;
        a[2][c] = nchi * u * gamma;
        f[2][c] = p + nchi * u * u;
        a[3][c] = n * gamma * s;
        f[3][c] = n * u * s;
    }
    Ok(FluidQuantities { a, f })
}

/// Residuals of the fluid balance laws between two macroscopic
/// snapshots on a periodic 1D mesh of spacing `dx`.
pub fn euler_residual(
    prev: (f64, &[MacroState]),
    next: (f64, &[MacroState]),
    dx: f64,
) -> Result<EulerResidualRow> {
    let cells = prev.1.len();
    if cells != next.1.len() || cells < 3 {
        return Err(Error::domain(format!(
            "need two equal rows of at least 3 cells, got {} and {}",
            cells,
            next.1.len()
        )));
    }
    let dt = next.0 - prev.0;
    if !(dt > 0.0) {
        return Err(Error::domain(format!("snapshots must be time-ordered, dt = {dt}")));
    }
    let qp = fluid_quantities(prev.1)?;
    let qn = fluid_quantities(next.1)?;
    let mut worst = [0.0f64; 3];
    let mut entropy_max = f64::NEG_INFINITY;
    for c in 0..cells {
        let right = (c + 1) % cells;
        let left = (c + cells - 1) % cells;
        for k in 0..4 {
            let time = (qn.a[k][c] - qp.a[k][c]) / dt;
            let flux_r = 0.5 * (qp.f[k][right] + qn.f[k][right]);
            let flux_l = 0.5 * (qp.f[k][left] + qn.f[k][left]);
            let res = time + (flux_r - flux_l) / (2.0 * dx);
            if k < 3 {
                worst[k] = worst[k].max(res.abs());
            } else {
                entropy_max = entropy_max.max(res);
            }
        }
    }
    Ok(EulerResidualRow {
        continuity: worst[0],
        energy: worst[1],
        momentum: worst[2],
        entropy_lhs_max: entropy_max,
    })
}

/// One rung of the relaxation-time ladder.
#[derive(Debug, Clone)]
pub struct EulerStudyRow {
    pub epsilon: f64,
    pub dt: f64,
    pub steps: usize,
    /// Mean over probe pairs of the max-over-cells residuals.
    pub continuity: f64,
    pub energy: f64,
    pub momentum: f64,
    /// Signed max of the macroscopic entropy expression over probes.
    pub entropy_lhs_max: f64,
    /// Scheme-consistent entropy audit: max over all steps and cells of
    /// (H' - H)/dt + (G_right - G_left)/dx; nonpositive up to roundoff.
    pub kinetic_entropy_max: f64,
    /// Largest relative drift of the five conserved totals over the run.
    pub conservation_drift: f64,
}

fn totals(f: &KineticField1d) -> [f64; 5] {
    let mut acc = [0.0; 5];
    for c in 0..f.x_cells() {
        let s = moments::field_sums::<5>(f.grid(), f.cell(c), |q, q0, v| {
            [v, q0 * v, q[0] * v, q[1] * v, q[2] * v]
        });
        for k in 0..5 {
            acc[k] += s[k];
        }
    }
    acc.map(|v| v * f.dx())
}

fn macro_row(f: &KineticField1d) -> Result<Vec<MacroState>> {
    (0..f.x_cells())
        .map(|c| moments::macro_from_f(f.grid(), f.cell(c)))
        .collect()
}

/// Runs the kinetic solver from the smooth wave profile at each epsilon
/// and measures how far its macroscopic fields are from solving the
/// fluid system. Every rung uses the same dt = cfl * dx, so the scheme's
/// discretization error is identical across the ladder and the residual
/// isolates the relaxation rate; collisions use the exactly conservative
/// linear mode, which subcycles internally once dt exceeds the substep
/// bound at small epsilon.
pub fn euler_limit_study(
    grid: &Arc<MomentumGrid>,
    x_cells: usize,
    epsilons: &[f64],
    t_end: f64,
    cfl: f64,
    probes: usize,
) -> Result<Vec<EulerStudyRow>> {
    if !(t_end > 0.0) || !(cfl > 0.0 && cfl <= 1.0) || probes == 0 {
        return Err(Error::Config(format!(
            "need t_end > 0, cfl in (0, 1], probes > 0; got ({t_end}, {cfl}, {probes})"
        )));
    }
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        if !(eps > 0.0) {
            return Err(Error::Config(format!("epsilon must be positive, got {eps}")));
        }
        let mut f = equilibrium_column(grid, x_cells, 1.0, smooth_wave_profile)?;
        let dx = f.dx();
        let dt_raw = cfl * dx;
        let steps = (t_end / dt_raw).ceil() as usize;
        let dt = t_end / steps as f64;

        // Probe pairs (k, k+1), clustered past the initial layer.
        let lo = steps / 2;
        let span = steps - lo;
        let count = probes.min(span);
        let probe_starts: Vec<usize> =
            (0..count).map(|p| lo + p * span / count).collect();
        let mut wanted = vec![false; steps + 1];
        for &k in &probe_starts {
            wanted[k] = true;
            wanted[k + 1] = true;
        }

        let start_totals = totals(&f);
        let mut snapshots: Vec<Option<(f64, Vec<MacroState>)>> = vec![None; steps + 1];
        if wanted[0] {
            snapshots[0] = Some((0.0, macro_row(&f)?));
        }

        let cells = f.x_cells();
        let mut audit_max = f64::NEG_INFINITY;
        let mut h_before = vec![0.0; cells];
        let mut flux = vec![0.0; cells];
        for s in 1..=steps {
            for c in 0..cells {
                h_before[c] = kinetic_entropy(f.grid(), f.cell(c));
                // Interface between cell c and its right neighbor.
                flux[c] = upwind_entropy_flux(f.grid(), f.cell(c), f.cell((c + 1) % cells));
            }
            transport_step(&mut f, dt)?;
            relax_step(&mut f, dt, eps, CollisionMode::Linear)?;
            for c in 0..cells {
                let h_after = kinetic_entropy(f.grid(), f.cell(c));
                let left = (c + cells - 1) % cells;
                let balance = (h_after - h_before[c]) / dt + (flux[c] - flux[left]) / dx;
                audit_max = audit_max.max(balance);
            }
            if wanted[s] {
                snapshots[s] = Some((s as f64 * dt, macro_row(&f)?));
            }
        }

        let end_totals = totals(&f);
        let scale = start_totals[1].abs().max(start_totals[0].abs());
        let conservation_drift = start_totals
            .iter()
            .zip(&end_totals)
            .map(|(a, b)| (a - b).abs() / scale)
            .fold(0.0f64, f64::max);

        let mut sums = [0.0f64; 3];
        let mut entropy_lhs_max = f64::NEG_INFINITY;
        for &k in &probe_starts {
            let prev = snapshots[k].as_ref().expect("probe snapshot recorded");
            let next = snapshots[k + 1].as_ref().expect("probe snapshot recorded");
            let r = euler_residual((prev.0, &prev.1), (next.0, &next.1), dx)?;
            sums[0] += r.continuity;
            sums[1] += r.energy;
            sums[2] += r.momentum;
            entropy_lhs_max = entropy_lhs_max.max(r.entropy_lhs_max);
        }
        let m = probe_starts.len() as f64;
        rows.push(EulerStudyRow {
            epsilon: eps,
            dt,
            steps,
            continuity: sums[0] / m,
            energy: sums[1] / m,
            momentum: sums[2] / m,
            entropy_lhs_max,
            kinetic_entropy_max: audit_max,
            conservation_drift,
        });
    }
    Ok(rows)
}
