//! The slow-particle regime: equilibria approach classical Maxwellians.
//!
//! The speed ratio epsilon couples the two descriptions: a classical
//! state (n, u_nr, beta_nr) corresponds to the relativistic parameters
//! u_f = epsilon u_nr and beta_f = beta_nr / epsilon^2, and momenta scale
//! as q = epsilon qbar. In the scaled variable qbar the equilibrium
//! converges to the Maxwellian at second order in epsilon, which is what
//! the study measures.

use super::classical::{classical_state_of, sample_maxwellian, ClassicalState};
use crate::bessel;
use crate::error::{Error, Result};
use crate::juttner::fit::fit_equilibrium;
use crate::juttner::params::comoving_shift;
use crate::phase::grid::MomentumGrid;
use crate::phase::moments;

/// One rung of the slow-particle ladder.
#[derive(Debug, Clone, Copy)]
pub struct NrStudyRow {
    pub epsilon: f64,
    /// sup |eps^3 J(eps qbar) - G(qbar)| / sup G on the common grid.
    pub sup_distance: f64,
    /// |eps^2 beta_f / beta_nr - 1| with beta_f from the closure of the
    /// lifted Maxwellian.
    pub beta_gap: f64,
}

/// Values of the equilibrium with parameters (n, beta_nr/eps^2,
/// eps u_nr), pulled back to the qbar grid (a factor eps^3 from the
/// volume element). Evaluated in rest-energy-subtracted form so the huge
/// exp(beta_f) against exp(-beta_f q^0) cancellation never materializes.
fn scaled_equilibrium(state: &ClassicalState, epsilon: f64, grid: &MomentumGrid) -> Result<Vec<f64>> {
    let beta_f = state.beta() / (epsilon * epsilon);
    let u = state.velocity;
    let uf = [epsilon * u[0], epsilon * u[1], epsilon * u[2]];
    let gamma = (1.0 + uf[0] * uf[0] + uf[1] * uf[1] + uf[2] * uf[2]).sqrt();
    let k2_scaled = bessel::bessel_k_scaled(2, beta_f)?;
    let prefactor = state.density * beta_f * epsilon.powi(3)
        / (4.0 * std::f64::consts::PI * k2_scaled);
    let n = grid.size();
    let axis = grid.axis();
    let mut values = vec![0.0; grid.total()];
    for (i, &bx) in axis.iter().enumerate() {
        for (j, &by) in axis.iter().enumerate() {
            for (k, &bz) in axis.iter().enumerate() {
                let q = [epsilon * bx, epsilon * by, epsilon * bz];
                let q0 = (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
                let shift = comoving_shift(uf, gamma, q, q0);
                values[(i * n + j) * n + k] = prefactor * (-beta_f * shift).exp();
            }
        }
    }
    Ok(values)
}

/// Rejects grids whose boundary still carries weight: every study metric
/// is a sup over the grid, so an undersized box silently truncates it.
fn check_support(grid: &MomentumGrid, state: &ClassicalState) -> Result<()> {
    let speed = state
        .velocity
        .iter()
        .map(|c| c * c)
        .sum::<f64>()
        .sqrt();
    let margin = (grid.cutoff() - speed).max(0.0);
    let boundary = (-margin * margin / (2.0 * state.temperature)).exp();
    if boundary > 1e-10 {
        return Err(Error::domain(format!(
            "grid cutoff {} leaves boundary weight {boundary:.3e}; enlarge the box",
            grid.cutoff()
        )));
    }
    Ok(())
}

/// For each epsilon: the sup-distance between the scaled equilibrium and
/// the Maxwellian of `state`, and the closure-temperature mismatch from
/// fitting the lifted Maxwellian on the matching relativistic grid.
/// Both metrics shrink at second order in epsilon.
pub fn nr_limit_study(
    state: &ClassicalState,
    epsilons: &[f64],
    qbar_cutoff: f64,
    nodes: usize,
) -> Result<Vec<NrStudyRow>> {
    let grid = MomentumGrid::new(qbar_cutoff, nodes)?;
    check_support(&grid, state)?;
    let maxwellian = sample_maxwellian(state, &grid);
    let sup_g = maxwellian.iter().copied().fold(0.0f64, f64::max);
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        if !(eps > 0.0 && eps <= 0.3) {
            return Err(Error::domain(format!("epsilon must lie in (0, 0.3], got {eps}")));
        }
        let scaled = scaled_equilibrium(state, eps, &grid)?;
        let sup_distance = scaled
            .iter()
            .zip(&maxwellian)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
            / sup_g;

        // Lift the Maxwellian onto the relativistic lattice q = eps qbar
        // (same node count, cutoff shrunk by eps, values up by eps^-3)
        // and read the closure's inverse temperature back.
        let rel_grid = MomentumGrid::new(eps * qbar_cutoff, nodes)?;
        let lifted: Vec<f64> = maxwellian.iter().map(|v| v / eps.powi(3)).collect();
        let fitted = fit_equilibrium(&rel_grid, &lifted)?;
        let beta_gap = (eps * eps * fitted.params.beta / state.beta() - 1.0).abs();
        rows.push(NrStudyRow { epsilon: eps, sup_distance, beta_gap });
    }
    Ok(rows)
}

/// The three pieces of the energy of a lifted classical distribution:
/// rest mass, bulk kinetic, internal; plus the defect of the identity
/// e_f + eps^2 n |u|^2 / 2 = n + (3/2) eps^2 n T at third order.
#[derive(Debug, Clone, Copy)]
pub struct RestEnergySplit {
    pub rest: f64,
    pub bulk_kinetic: f64,
    pub internal: f64,
    /// Comoving energy density of the lifted field.
    pub energy: f64,
    /// energy + bulk_kinetic - rest - internal; O(eps^3).
    pub residual: f64,
}

/// Lifts a classical distribution to the relativistic lattice and splits
/// its comoving energy density into rest, bulk and internal parts.
pub fn rest_energy_decomposition(
    grid: &MomentumGrid,
    f_classical: &[f64],
    epsilon: f64,
) -> Result<RestEnergySplit> {
    if !(epsilon > 0.0 && epsilon <= 0.3) {
        return Err(Error::domain(format!("epsilon must lie in (0, 0.3], got {epsilon}")));
    }
    let state = classical_state_of(grid, f_classical)?;
    let rel_grid = MomentumGrid::new(epsilon * grid.cutoff(), grid.size())?;
    let lifted: Vec<f64> = f_classical.iter().map(|v| v / epsilon.powi(3)).collect();
    let m = moments::moments_of(&rel_grid, &lifted);
    let n0 = m.current[0];
    let spatial2 = m.current[1] * m.current[1]
        + m.current[2] * m.current[2]
        + m.current[3] * m.current[3];
    let invariant = n0 * n0 - spatial2;
    if !(invariant > 0.0) {
        return Err(Error::NonTimelike(format!("current is not timelike: N^0 = {n0}")));
    }
    let n_f = invariant.sqrt();
    let u3 = [m.current[1] / n_f, m.current[2] / n_f, m.current[3] / n_f];
    let energy = moments::energy_density(&m.stress, u3);

    let speed2 = state.velocity.iter().map(|c| c * c).sum::<f64>();
    let rest = state.density;
    let bulk_kinetic = 0.5 * epsilon * epsilon * state.density * speed2;
    let internal = 1.5 * epsilon * epsilon * state.density * state.temperature;
    let residual = energy + bulk_kinetic - rest - internal;
    Ok(RestEnergySplit { rest, bulk_kinetic, internal, energy, residual })
}
