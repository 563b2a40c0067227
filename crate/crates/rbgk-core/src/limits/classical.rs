//! Classical (slow-particle) states and the Maxwellian they equilibrate to.

use crate::error::{Error, Result};
use crate::phase::grid::MomentumGrid;
use crate::phase::moments::field_sums;

/// Macroscopic state of a slow gas: density, mean velocity, temperature.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalState {
    pub density: f64,
    pub velocity: [f64; 3],
    pub temperature: f64,
}

impl ClassicalState {
    pub fn new(density: f64, velocity: [f64; 3], temperature: f64) -> Result<Self> {
        if !(density > 0.0) || !(temperature > 0.0) || !density.is_finite() {
            return Err(Error::domain(format!(
                "classical state needs n > 0 and T > 0, got n = {density}, T = {temperature}"
            )));
        }
        Ok(ClassicalState { density, velocity, temperature })
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }
}

/// The Maxwellian G(q) = n (2 pi T)^{-3/2} exp(-|q - u|^2 / (2T)).
pub fn classical_maxwellian(state: &ClassicalState, q: [f64; 3]) -> f64 {
    let t = state.temperature;
    let norm = state.density * (2.0 * std::f64::consts::PI * t).powf(-1.5);
    let d0 = q[0] - state.velocity[0];
    let d1 = q[1] - state.velocity[1];
    let d2 = q[2] - state.velocity[2];
    norm * (-(d0 * d0 + d1 * d1 + d2 * d2) / (2.0 * t)).exp()
}

/// Samples the Maxwellian on a grid (the grid's on-shell energy is
/// irrelevant here; only the lattice of q values is used).
pub fn sample_maxwellian(state: &ClassicalState, grid: &MomentumGrid) -> Vec<f64> {
    let n = grid.size();
    let axis = grid.axis();
    let mut values = vec![0.0; grid.total()];
    for (i, &qx) in axis.iter().enumerate() {
        for (j, &qy) in axis.iter().enumerate() {
            for (k, &qz) in axis.iter().enumerate() {
                values[(i * n + j) * n + k] = classical_maxwellian(state, [qx, qy, qz]);
            }
        }
    }
    values
}

/// Density, mean velocity and temperature of a sampled classical
/// distribution: n = sum f, u = <q>, T = (<|q|^2> - |u|^2) / 3.
///
/// Fails as degenerate when the variance integral does not exceed |u|^2.
pub fn classical_state_of(grid: &MomentumGrid, f: &[f64]) -> Result<ClassicalState> {
    let sums = field_sums::<5>(grid, f, |q, _q0, v| {
        [v, q[0] * v, q[1] * v, q[2] * v, (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]) * v]
    });
    let n = sums[0];
    if !(n > 0.0) {
        return Err(Error::domain(format!("classical density must be positive, got {n}")));
    }
    let u = [sums[1] / n, sums[2] / n, sums[3] / n];
    let speed2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    let t = (sums[4] / n - speed2) / 3.0;
    if !(t > 0.0) {
        return Err(Error::domain(format!(
            "degenerate temperature: variance integral {} does not exceed |u|^2 = {speed2}",
            sums[4] / n
        )));
    }
    Ok(ClassicalState { density: n, velocity: u, temperature: t })
}
