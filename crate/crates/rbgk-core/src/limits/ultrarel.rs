//! The negligible-rest-mass regime: equilibria approach their massless
//! form and the energy density approaches three times the pressure.
//!
//! Here the rest-mass ratio epsilon rescales the on-shell energy to
//! sqrt(eps^2 + |qbar|^2) / eps on the qbar lattice. All moments of a
//! state are taken on one shared grid with epsilon-dependent weights, so
//! quadrature error largely cancels from the comparisons and the metrics
//! isolate the physical epsilon dependence.

use crate::bessel;
use crate::error::{Error, Result};
use crate::phase::grid::MomentumGrid;
use crate::phase::moments::field_sums;

/// Massless-gas macroscopic state. Energy density and pressure are
/// derived fields, so e = 3 p holds identically.
#[derive(Debug, Clone, Copy)]
pub struct UltraRelState {
    pub density: f64,
    pub velocity: [f64; 3],
    pub beta: f64,
}

impl UltraRelState {
    pub fn new(density: f64, beta: f64, velocity: [f64; 3]) -> Result<Self> {
        if !(density > 0.0) || !(beta > 0.0) {
            return Err(Error::domain(format!(
                "ultra-relativistic state needs n > 0 and beta > 0, got ({density}, {beta})"
            )));
        }
        Ok(UltraRelState { density, velocity, beta })
    }

    pub fn gamma(&self) -> f64 {
        let u = self.velocity;
        (1.0 + u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt()
    }

    pub fn pressure(&self) -> f64 {
        self.density / self.beta
    }

    pub fn energy_density(&self) -> f64 {
        3.0 * self.pressure()
    }
}

/// The massless equilibrium (n beta^3 / 8 pi) exp(-beta (|q| gamma - u.q)).
pub fn massless_equilibrium(state: &UltraRelState, q: [f64; 3]) -> f64 {
    let r = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    let u = state.velocity;
    let exponent = -state.beta * (r * state.gamma() - (u[0] * q[0] + u[1] * q[1] + u[2] * q[2]));
    let amp = state.density * state.beta.powi(3) / (8.0 * std::f64::consts::PI);
    amp * exponent.exp()
}

pub fn sample_massless(state: &UltraRelState, grid: &MomentumGrid) -> Vec<f64> {
    let n = grid.size();
    let axis = grid.axis();
    let mut values = vec![0.0; grid.total()];
    for (i, &qx) in axis.iter().enumerate() {
        for (j, &qy) in axis.iter().enumerate() {
            for (k, &qz) in axis.iter().enumerate() {
                values[(i * n + j) * n + k] = massless_equilibrium(state, [qx, qy, qz]);
            }
        }
    }
    values
}

/// Macroscopic state per the massless moment definitions on the grid:
/// n = sqrt((sum f)^2 - |sum (q/|q|) f|^2), u from the direction moment,
/// beta = 2 (sum f / |q|) / n. The midpoint lattice never hits q = 0.
pub fn ur_state_of(grid: &MomentumGrid, f: &[f64]) -> Result<UltraRelState> {
    let sums = field_sums::<5>(grid, f, |q, _q0, v| {
        let r = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
        [v, q[0] / r * v, q[1] / r * v, q[2] / r * v, v / r]
    });
    let invariant = sums[0] * sums[0] - (sums[1] * sums[1] + sums[2] * sums[2] + sums[3] * sums[3]);
    if !(invariant > 0.0) {
        return Err(Error::NonTimelike(format!(
            "massless current is not timelike: total = {}",
            sums[0]
        )));
    }
    let n = invariant.sqrt();
    let beta = 2.0 * sums[4] / n;
    UltraRelState::new(n, beta, [sums[1] / n, sums[2] / n, sums[3] / n])
}

/// One rung of the rest-mass ladder.
#[derive(Debug, Clone, Copy)]
pub struct UrStudyRow {
    pub epsilon: f64,
    /// Closure inverse temperature of the epsilon-scaled problem.
    pub beta_f: f64,
    /// |beta_f / epsilon - beta_ur|, both sides measured on the grid.
    pub beta_gap: f64,
    /// sup |J_scaled - massless| / sup massless on the grid.
    pub sup_distance: f64,
    /// beta_f Psi(beta_f) - 3: the energy-to-pressure surplus, which
    /// vanishes as the state turns massless.
    pub energy_pressure_gap: f64,
}

/// For each epsilon: fit the closure of `f` under the scaled on-shell
/// energy sqrt(eps^2 + |q|^2)/eps, then compare against the massless
/// moments and equilibrium of the same samples.
pub fn ur_limit_study(grid: &MomentumGrid, f: &[f64], epsilons: &[f64]) -> Result<Vec<UrStudyRow>> {
    let limit = ur_state_of(grid, f)?;
    let massless = sample_massless(&limit, grid);
    let sup_massless = massless.iter().copied().fold(0.0f64, f64::max);

    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        if !(eps > 0.0 && eps <= 0.3) {
            return Err(Error::domain(format!("epsilon must lie in (0, 0.3], got {eps}")));
        }
        let sums = field_sums::<5>(grid, f, |q, _q0, v| {
            let e = (eps * eps + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
            [v, q[0] / e * v, q[1] / e * v, q[2] / e * v, eps / e * v]
        });
        let invariant =
            sums[0] * sums[0] - (sums[1] * sums[1] + sums[2] * sums[2] + sums[3] * sums[3]);
        if !(invariant > 0.0) {
            return Err(Error::NonTimelike("scaled current is not timelike".into()));
        }
        let n_f = invariant.sqrt();
        let u_f = [sums[1] / n_f, sums[2] / n_f, sums[3] / n_f];
        let alpha = sums[4] / n_f;
        let beta_f = bessel::inverse_ratio(alpha)?;
        let beta_gap = (beta_f / eps - limit.beta).abs();

        // Equilibrium of the fitted state in qbar variables, with the
        // 1/(eps^3 M) prefactor written through the scaled K2 so the
        // massless limit is approached without under/overflow.
        let k2_scaled = bessel::bessel_k_scaled(2, beta_f)?;
        let amp = n_f * beta_f / (4.0 * std::f64::consts::PI * k2_scaled * eps.powi(3));
        let gamma_f = (1.0 + u_f[0] * u_f[0] + u_f[1] * u_f[1] + u_f[2] * u_f[2]).sqrt();
        let n = grid.size();
        let axis = grid.axis();
        let mut sup_distance = 0.0f64;
        for (i, &qx) in axis.iter().enumerate() {
            for (j, &qy) in axis.iter().enumerate() {
                for (k, &qz) in axis.iter().enumerate() {
                    let e = (eps * eps + qx * qx + qy * qy + qz * qz).sqrt();
                    let exponent = beta_f
                        - (beta_f / eps) * (gamma_f * e - (u_f[0] * qx + u_f[1] * qy + u_f[2] * qz));
                    let j_scaled = amp * exponent.exp();
                    let diff = (j_scaled - massless[(i * n + j) * n + k]).abs();
                    sup_distance = sup_distance.max(diff);
                }
            }
        }
        sup_distance /= sup_massless;

        let energy_pressure_gap = beta_f * bessel::ratio_k1k2(beta_f)?;
        rows.push(UrStudyRow { epsilon: eps, beta_f, beta_gap, sup_distance, energy_pressure_gap });
    }
    Ok(rows)
}

/// Relative error of the small-beta normalization law 1/M = beta^3/(8 pi).
pub fn normalization_small_beta_error(beta: f64) -> Result<f64> {
    let m = bessel::normalization(beta)?;
    let asymptotic = beta.powi(3) / (8.0 * std::f64::consts::PI);
    Ok((1.0 / m / asymptotic - 1.0).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> MomentumGrid {
        MomentumGrid::new(40.0, 96).unwrap()
    }

    fn state() -> UltraRelState {
        UltraRelState::new(1.0, 1.0, [0.3, 0.0, -0.1]).unwrap()
    }

    #[test]
    fn massless_moments_read_back_the_parameters() {
        let g = MomentumGrid::new(40.0, 192).unwrap();
        let s = state();
        let f = sample_massless(&s, &g);
        let back = ur_state_of(&g, &f).unwrap();
        // The kink at q = 0 limits midpoint-rule accuracy to O((beta h)^2).
        assert!((back.density - s.density).abs() < 5e-3 * s.density, "n {}", back.density);
        assert!((back.beta - s.beta).abs() < 2e-2 * s.beta, "beta {}", back.beta);
        for d in 0..3 {
            assert!((back.velocity[d] - s.velocity[d]).abs() < 5e-3);
        }
        assert_eq!(back.energy_density(), 3.0 * back.pressure());
    }

    #[test]
    fn ladder_metrics_shrink_toward_the_massless_limit() {
        let g = grid();
        let f = sample_massless(&state(), &g);
        let rows = ur_limit_study(&g, &f, &[0.2, 0.1, 0.05]).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].beta_gap < w[0].beta_gap, "beta gaps {:?}", (w[0].beta_gap, w[1].beta_gap));
            assert!(
                w[1].sup_distance < w[0].sup_distance,
                "sup distances {:?}",
                (w[0].sup_distance, w[1].sup_distance)
            );
            assert!(w[1].energy_pressure_gap < w[0].energy_pressure_gap);
        }
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon, r.beta_gap)).collect();
        let order = super::super::orderfit::fitted_order(&pts).unwrap();
        assert!(order >= 0.8, "beta gap order {order:.2}");
    }

    #[test]
    fn energy_approaches_three_pressures() {
        let g = grid();
        let f = sample_massless(&state(), &g);
        let rows = ur_limit_study(&g, &f, &[0.05]).unwrap();
        let gap = rows[0].energy_pressure_gap;
        // e/p - 3 = beta_f K1/K2(beta_f), about beta_f^2 / 2 here.
        assert!(gap > 0.0 && gap < rows[0].beta_f, "gap {gap:.3e}");
    }

    #[test]
    fn normalization_law_error_shrinks_with_beta() {
        let e1 = normalization_small_beta_error(0.1).unwrap();
        let e2 = normalization_small_beta_error(0.05).unwrap();
        let e3 = normalization_small_beta_error(0.025).unwrap();
        assert!((e1 - 2.486e-3).abs() < 2e-6, "err(0.1) = {e1:.6e}");
        assert!((e2 - 6.239e-4).abs() < 5e-7, "err(0.05) = {e2:.6e}");
        assert!((e3 - 1.562e-4).abs() < 2e-7, "err(0.025) = {e3:.6e}");
        assert!(e3 < e2 && e2 < e1);
    }
}
