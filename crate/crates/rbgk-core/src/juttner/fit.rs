//! The local-equilibrium closure: given a distribution f on a grid, find
//! the equilibrium whose grid moments
//!
//! ```text
//! integral g dq / q^0,  integral g dq,  integral (q / q^0) g dq
//! ```
//!
//! match those of f. The five functionals are exactly the invariants of
//! the relaxation dynamics (1/q^0 weighting turns them into the conserved
//! particle number, energy, and momentum), so matching them on the grid,
//! rather than analytically, makes conservation and the entropy ordering
//! of the relaxation step hold to machine precision on the discrete level.
//!
//! The fit seeds from the analytic closure (density and velocity from the
//! particle current, beta from inverting K_1/K_2 on the scalar moment
//! ratio) and then runs full Newton iterations in the exponential-family
//! coordinates (ln amplitude, beta, u).

use super::params::{comoving_shift, JuttnerParams, JuttnerSampler};
use crate::error::{Error, Result};
use crate::phase::grid::{energy, MomentumGrid};
use crate::phase::moments::{self, MacroState};
use nalgebra::{SMatrix, SVector};
use rayon::prelude::*;

/// Largest acceptable relative mismatch of the five matched moments.
pub const CLOSURE_TOL: f64 = 1e-13;

/// Newton iteration cap; the analytic seed is already accurate to the
/// grid's quadrature error, so a handful of steps suffices.
pub const CLOSURE_MAX_ITERS: usize = 30;

/// Result of fitting the matched equilibrium of a distribution.
#[derive(Debug, Clone)]
pub struct ClosureOutput {
    /// Analytic parameters of the fitted equilibrium.
    pub params: JuttnerParams,
    /// The equilibrium sampled on the grid; its five grid moments agree
    /// with those of the input to within [`CLOSURE_TOL`].
    pub equilibrium: Vec<f64>,
    /// The analytic closure used as the Newton seed.
    pub seed: MacroState,
    pub iterations: usize,
    /// Final max relative moment mismatch.
    pub residual: f64,
}

struct NewtonPass {
    values: Vec<f64>,
    /// Five moments then the 5x5 Jacobian, row-major.
    sums: [f64; 30],
}

/// One evaluation of the trial equilibrium: samples it on the grid and
/// accumulates moments and Jacobian in the same sweep (plane-parallel,
/// combined in order, so the result is reproducible).
fn newton_pass(grid: &MomentumGrid, ln_amp: f64, beta: f64, u: [f64; 3]) -> NewtonPass {
    let n = grid.size();
    let axis = grid.axis();
    let gamma = energy(u);
    let mut values = vec![0.0; grid.total()];
    let plane_sums: Vec<[f64; 30]> = values
        .par_chunks_mut(n * n)
        .enumerate()
        .map(|(i, plane)| {
            let qx = axis[i];
            let mut acc = [0.0; 30];
            let mut idx = 0;
            for &qy in axis {
                let s2 = qx * qx + qy * qy;
                for &qz in axis {
                    let q = [qx, qy, qz];
                    let q0 = (1.0 + s2 + qz * qz).sqrt();
                    let shift = comoving_shift(u, gamma, q, q0);
                    let j = (ln_amp - beta * shift).exp();
                    plane[idx] = j;
                    idx += 1;
                    // Moment basis and parameter derivatives of j.
                    let basis = [1.0 / q0, 1.0, q[0] / q0, q[1] / q0, q[2] / q0];
                    let deriv = [
                        j,
                        -shift * j,
                        -beta * (q0 * u[0] / gamma - q[0]) * j,
                        -beta * (q0 * u[1] / gamma - q[1]) * j,
                        -beta * (q0 * u[2] / gamma - q[2]) * j,
                    ];
                    for r in 0..5 {
                        acc[r] += basis[r] * j;
                        for c in 0..5 {
                            acc[5 + 5 * r + c] += basis[r] * deriv[c];
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut sums = [0.0; 30];
    for p in plane_sums {
        for t in 0..30 {
            sums[t] += p[t];
        }
    }
    let w = grid.weight();
    for t in sums.iter_mut() {
        *t *= w;
    }
    NewtonPass { values, sums }
}

/// Fits the equilibrium whose grid moments match those of `f`.
pub fn fit_equilibrium(grid: &MomentumGrid, f: &[f64]) -> Result<ClosureOutput> {
    // Target moments of f.
    let t = moments::field_sums::<5>(grid, f, |q, q0, v| {
        [v / q0, v, q[0] / q0 * v, q[1] / q0 * v, q[2] / q0 * v]
    });
    let seed = moments::macro_from_current([t[1], t[2], t[3], t[4]], t[0])?;

    // Moment scales: the spatial-flux moments are bounded by the particle
    // moment, so it serves as their scale near u = 0.
    let scale = [t[0].abs(), t[1].abs(), t[1].abs(), t[1].abs(), t[1].abs()];

    let seed_params = JuttnerParams::new(seed.density, seed.beta, seed.velocity)?;
    let mut ln_amp = seed_params.sampler()?.ln_amplitude();
    let mut beta = seed.beta;
    let mut u = seed.velocity;

    let mut best_residual = f64::INFINITY;
    for iter in 0..CLOSURE_MAX_ITERS {
        let pass = newton_pass(grid, ln_amp, beta, u);
        let mut residual: f64 = 0.0;
        for r in 0..5 {
            residual = residual.max((pass.sums[r] - t[r]).abs() / scale[r]);
        }
        if residual <= CLOSURE_TOL {
            let sampler = JuttnerSampler::from_exponential_coords(ln_amp, beta, u);
            let params = JuttnerParams::new(sampler.density()?, beta, u)?;
            return Ok(ClosureOutput {
                params,
                equilibrium: pass.values,
                seed,
                iterations: iter,
                residual,
            });
        }
        if !residual.is_finite() {
            return Err(Error::Convergence(format!(
                "equilibrium fit diverged at iteration {iter} (beta = {beta}, |u| = {:.3e})",
                energy(u)
            )));
        }
        best_residual = best_residual.min(residual);

        let mut a = SMatrix::<f64, 5, 5>::zeros();
        let mut rhs = SVector::<f64, 5>::zeros();
        for r in 0..5 {
            rhs[r] = t[r] - pass.sums[r];
            for c in 0..5 {
                a[(r, c)] = pass.sums[5 + 5 * r + c];
            }
        }
        let delta = a.lu().solve(&rhs).ok_or_else(|| {
            Error::Convergence("singular Jacobian in equilibrium fit".to_string())
        })?;
        ln_amp += delta[0];
        // Keep beta positive: a huge Newton step cannot push it through 0.
        beta = (beta + delta[1]).max(0.1 * beta);
        u[0] += delta[2];
        u[1] += delta[3];
        u[2] += delta[4];
    }
    Err(Error::Convergence(format!(
        "equilibrium fit did not reach {CLOSURE_TOL:e} in {CLOSURE_MAX_ITERS} iterations \
         (best residual {best_residual:.3e})"
    )))
}
