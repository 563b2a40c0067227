//! Time evolution of the linearized equation, mode by mode.
//!
//! In a periodic slab the transport term diagonalizes under the spatial
//! Fourier transform, leaving one dense complex system per frequency:
//! df/dt = [L - i (zeta . q / q0)] f. Each mode is integrated with the
//! Crank-Nicolson scheme, which is A-stable and inherits the generator's
//! dissipativity: the real part of the quadratic form is <Lf, f> <= 0,
//! so every step is a contraction in the plain L2 norm up to roundoff.
//! Any norm growth beyond a strict tolerance aborts the run.

use super::equilibrium::Equilibrium0;
use super::matrices::assemble_mode_generator;
use crate::error::{Error, Result};
use crate::phase::field::KineticField1d;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Relative per-step growth beyond which the scheme is declared broken.
pub const CONTRACTION_SLACK: f64 = 1e-10;

/// Norm history and final state of one Fourier mode.
#[derive(Debug, Clone)]
pub struct ModeTrajectory {
    pub zeta: [f64; 3],
    /// Output times, starting at 0.
    pub times: Vec<f64>,
    /// Plain L2 norms at those times; non-increasing.
    pub norms: Vec<f64>,
    pub final_state: Vec<Complex64>,
}

fn mode_norm(eq: &Equilibrium0, f: &DVector<Complex64>) -> f64 {
    (f.iter().map(|z| z.norm_sqr()).sum::<f64>() * eq.grid().weight()).sqrt()
}

/// Integrates df/dt = [L - i zeta . q / q0] f to `t_end` with uniform
/// Crank-Nicolson steps of length at most `dt`.
pub fn evolve_fourier_mode(
    eq: &Equilibrium0,
    zeta: [f64; 3],
    f0: &[Complex64],
    t_end: f64,
    dt: f64,
) -> Result<ModeTrajectory> {
    if f0.len() != eq.grid().total() {
        return Err(Error::Config(format!(
            "initial state has {} entries for a {}-node grid",
            f0.len(),
            eq.grid().total()
        )));
    }
    if !(t_end > 0.0 && dt > 0.0) || !t_end.is_finite() || !dt.is_finite() {
        return Err(Error::Config(format!("need positive finite t_end, dt; got ({t_end}, {dt})")));
    }
    let steps = (t_end / dt).ceil().max(1.0) as usize;
    let dt = t_end / steps as f64;

    let b = assemble_mode_generator(eq, zeta)?;
    let n = b.nrows();
    let half = Complex64::new(0.5 * dt, 0.0);
    let mut forward = DMatrix::from_fn(n, n, |i, j| half * b[(i, j)]);
    let mut backward = DMatrix::from_fn(n, n, |i, j| -half * b[(i, j)]);
    for i in 0..n {
        forward[(i, i)] += Complex64::new(1.0, 0.0);
        backward[(i, i)] += Complex64::new(1.0, 0.0);
    }
    // The generator is dissipative, so I - dt/2 B is always invertible.
    let lu = backward.lu();

    let mut f = DVector::from_column_slice(f0);
    let mut norms = Vec::with_capacity(steps + 1);
    let mut times = Vec::with_capacity(steps + 1);
    norms.push(mode_norm(eq, &f));
    times.push(0.0);
    for s in 1..=steps {
        let rhs = &forward * &f;
        f = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Convergence("Crank-Nicolson matrix did not factor".into()))?;
        let norm = mode_norm(eq, &f);
        let prev = *norms.last().expect("norm history nonempty");
        if norm > prev * (1.0 + CONTRACTION_SLACK) {
            return Err(Error::Scheme(format!(
                "mode norm grew from {prev:.12e} to {norm:.12e} at step {s}"
            )));
        }
        norms.push(norm);
        times.push(s as f64 * dt);
    }
    Ok(ModeTrajectory { zeta, times, norms, final_state: f.as_slice().to_vec() })
}

/// Norm history and final state of a full linearized initial value
/// problem on the periodic slab.
#[derive(Debug)]
pub struct IvpTrajectory {
    pub times: Vec<f64>,
    /// Discrete L2(x, q) norms; non-increasing.
    pub norms: Vec<f64>,
    pub final_field: KineticField1d,
}

/// Solves df/dt = L f - qhat . grad_x f for a real perturbation field on
/// the periodic slab: discrete Fourier transform in x, Crank-Nicolson
/// per mode, inverse transform. Frequencies above the Nyquist index are
/// mapped to their negative aliases; the reconstruction keeps the real
/// part (imaginary residue is roundoff for real input).
pub fn solve_linearized_ivp(
    eq: &Equilibrium0,
    f0: &KineticField1d,
    t_end: f64,
    dt: f64,
) -> Result<IvpTrajectory> {
    let nodes = eq.grid().total();
    if f0.grid().total() != nodes || f0.grid().cutoff() != eq.grid().cutoff() {
        return Err(Error::Config(
            "initial field and equilibrium live on different momentum grids".into(),
        ));
    }
    let n_x = f0.x_cells();
    let length = n_x as f64 * f0.dx();

    // Forward transform, node by node.
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n_x);
    let mut modes: Vec<Vec<Complex64>> = vec![vec![Complex64::ZERO; nodes]; n_x];
    let mut buf = vec![Complex64::ZERO; n_x];
    for i in 0..nodes {
        for (x, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(f0.cell(x)[i], 0.0);
        }
        fft.process(&mut buf);
        for (k, row) in modes.iter_mut().enumerate() {
            row[i] = buf[k];
        }
    }

    // Per-mode evolution; modes share the step layout by construction.
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut trajectories = Vec::with_capacity(n_x);
    for (k, mode) in modes.iter().enumerate() {
        let signed = if 2 * k <= n_x { k as f64 } else { k as f64 - n_x as f64 };
        let zeta = [two_pi * signed / length, 0.0, 0.0];
        trajectories.push(evolve_fourier_mode(eq, zeta, mode, t_end, dt)?);
    }

    // Parseval: ||f||^2 = (dx / n_x) sum_k ||fhat_k||^2.
    let times = trajectories[0].times.clone();
    let scale = f0.dx() / n_x as f64;
    let norms: Vec<f64> = (0..times.len())
        .map(|j| (trajectories.iter().map(|t| t.norms[j] * t.norms[j]).sum::<f64>() * scale).sqrt())
        .collect();

    // Inverse transform of the final states.
    let ifft = planner.plan_fft_inverse(n_x);
    let mut final_field = KineticField1d::zeros(f0.grid_arc(), n_x, length)?;
    for i in 0..nodes {
        for (k, b) in buf.iter_mut().enumerate() {
            *b = trajectories[k].final_state[i];
        }
        ifft.process(&mut buf);
        for (x, b) in buf.iter().enumerate() {
            final_field.cell_mut(x)[i] = b.re / n_x as f64;
        }
    }
    Ok(IvpTrajectory { times, norms, final_field })
}
