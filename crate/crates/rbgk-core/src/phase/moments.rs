//! Moment reductions over momentum grids.
//!
//! All reductions run one pass, parallelized over i-planes of the grid and
//! combined in plane order, so results are bit-reproducible regardless of
//! thread count. Streaming variants take the integrand as a closure and
//! never materialize a field, which keeps very large verification grids
//! affordable.

use super::grid::{energy, MomentumGrid};
use crate::bessel;
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Sum of `weight * per_node(q, q0)` over all nodes, K components at once.
/// Deterministic: planes are reduced in index order.
pub fn grid_sums<const K: usize>(
    grid: &MomentumGrid,
    per_node: impl Fn([f64; 3], f64) -> [f64; K] + Sync,
) -> [f64; K] {
    let axis = grid.axis();
    let planes: Vec<[f64; K]> = (0..grid.size())
        .into_par_iter()
        .map(|i| {
            let qx = axis[i];
            let mut acc = [0.0; K];
            for &qy in axis {
                let s2 = qx * qx + qy * qy;
                for &qz in axis {
                    let q = [qx, qy, qz];
                    let q0 = (1.0 + s2 + qz * qz).sqrt();
                    let v = per_node(q, q0);
                    for t in 0..K {
                        acc[t] += v[t];
                    }
                }
            }
            acc
        })
        .collect();
    let mut out = [0.0; K];
    for p in planes {
        for t in 0..K {
            out[t] += p[t];
        }
    }
    let w = grid.weight();
    for t in out.iter_mut() {
        *t *= w;
    }
    out
}

/// Sum of `weight * per_node(q, q0, f)` over all nodes of a stored field.
pub fn field_sums<const K: usize>(
    grid: &MomentumGrid,
    values: &[f64],
    per_node: impl Fn([f64; 3], f64, f64) -> [f64; K] + Sync,
) -> [f64; K] {
    assert_eq!(values.len(), grid.total(), "field length does not match grid");
    let axis = grid.axis();
    let n = grid.size();
    let planes: Vec<[f64; K]> = (0..n)
        .into_par_iter()
        .map(|i| {
            let qx = axis[i];
            let mut acc = [0.0; K];
            let mut idx = i * n * n;
            for &qy in axis {
                let s2 = qx * qx + qy * qy;
                for &qz in axis {
                    let q = [qx, qy, qz];
                    let q0 = (1.0 + s2 + qz * qz).sqrt();
                    let v = per_node(q, q0, values[idx]);
                    for t in 0..K {
                        acc[t] += v[t];
                    }
                    idx += 1;
                }
            }
            acc
        })
        .collect();
    let mut out = [0.0; K];
    for p in planes {
        for t in 0..K {
            out[t] += p[t];
        }
    }
    let w = grid.weight();
    for t in out.iter_mut() {
        *t *= w;
    }
    out
}

/// Full set of kinetic moments of one distribution:
/// particle current, stress-energy, entropy flux, and the extra scalar
/// moment that determines the temperature in the equilibrium closure.
#[derive(Debug, Clone, Copy)]
pub struct Moments {
    /// N^mu = integral q^mu f dq / q^0.
    pub current: [f64; 4],
    /// T^{mu nu} = integral q^mu q^nu f dq / q^0 (symmetric).
    pub stress: [[f64; 4]; 4],
    /// S^mu = -integral q^mu f ln f dq / q^0. Nodes with f <= 0 contribute
    /// zero (the x ln x integrand extends continuously by 0 at x = 0).
    pub entropy_flux: [f64; 4],
    /// integral f dq / q^0.
    pub alpha_moment: f64,
}

/// One-pass computation of all moments of a stored field.
pub fn moments_of(grid: &MomentumGrid, values: &[f64]) -> Moments {
    // Accumulator layout:
    //  0: f/q0            1: f            2-4: (q/q0) f     5: q0 f
    //  6-8: q f           9-14: q_a q_b f / q0 (xx xy xz yy yz zz)
    // 15: f ln f         16-18: (q/q0) f ln f
    let s = field_sums::<19>(grid, values, |q, q0, f| {
        let flnf = if f > 0.0 { f * f.ln() } else { 0.0 };
        [
            f / q0,
            f,
            q[0] / q0 * f,
            q[1] / q0 * f,
            q[2] / q0 * f,
            q0 * f,
            q[0] * f,
            q[1] * f,
            q[2] * f,
            q[0] * q[0] / q0 * f,
            q[0] * q[1] / q0 * f,
            q[0] * q[2] / q0 * f,
            q[1] * q[1] / q0 * f,
            q[1] * q[2] / q0 * f,
            q[2] * q[2] / q0 * f,
            flnf,
            q[0] / q0 * flnf,
            q[1] / q0 * flnf,
            q[2] / q0 * flnf,
        ]
    });
    Moments {
        current: [s[1], s[2], s[3], s[4]],
        stress: [
            [s[5], s[6], s[7], s[8]],
            [s[6], s[9], s[10], s[11]],
            [s[7], s[10], s[12], s[13]],
            [s[8], s[11], s[13], s[14]],
        ],
        entropy_flux: [-s[15], -s[16], -s[17], -s[18]],
        alpha_moment: s[0],
    }
}

/// Kinetic entropy H = integral f ln f dq of a stored field
/// (the time component of the entropy flux, with opposite sign).
pub fn kinetic_entropy(grid: &MomentumGrid, values: &[f64]) -> f64 {
    field_sums::<1>(grid, values, |_, _, f| [if f > 0.0 { f * f.ln() } else { 0.0 }])[0]
}

/// Macroscopic state extracted from a distribution: rest density, spatial
/// 4-velocity, inverse temperature, and the scalar ratio that fixed it.
#[derive(Debug, Clone, Copy)]
pub struct MacroState {
    pub density: f64,
    /// Spatial part of the 4-velocity u^mu; u^0 = sqrt(1 + |u|^2).
    pub velocity: [f64; 3],
    pub beta: f64,
    /// alpha = (1/n) integral f dq / q^0, the ratio inverted for beta.
    pub alpha: f64,
}

impl MacroState {
    pub fn gamma(&self) -> f64 {
        let u = self.velocity;
        (1.0 + u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt()
    }
}

/// Rest density and 4-velocity from a particle current, plus beta from the
/// alpha moment. Fails if the current is not future-directed timelike or
/// if alpha falls outside (0, 1).
pub fn macro_from_current(current: [f64; 4], alpha_moment: f64) -> Result<MacroState> {
    let [n0, n1, n2, n3] = current;
    let sq = n0 * n0 - n1 * n1 - n2 * n2 - n3 * n3;
    if !(n0 > 0.0) || !(sq > 0.0) {
        return Err(Error::NonTimelike(format!(
            "particle current ({n0:.6e}, {n1:.6e}, {n2:.6e}, {n3:.6e}) is not future-directed timelike"
        )));
    }
    let density = sq.sqrt();
    let velocity = [n1 / density, n2 / density, n3 / density];
    let alpha = alpha_moment / density;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(format!(
            "scalar moment ratio {alpha} outside (0, 1); distribution too far from any equilibrium"
        )));
    }
    let beta = bessel::inverse_ratio(alpha)?;
    Ok(MacroState { density, velocity, beta, alpha })
}

/// Macroscopic state of a stored field (one reduction pass).
pub fn macro_from_f(grid: &MomentumGrid, values: &[f64]) -> Result<MacroState> {
    let s = field_sums::<5>(grid, values, |q, q0, f| {
        [f / q0, f, q[0] / q0 * f, q[1] / q0 * f, q[2] / q0 * f]
    });
    macro_from_current([s[1], s[2], s[3], s[4]], s[0])
}

/// Energy density in the frame of 4-velocity u: e = u_mu u_nu T^{mu nu}.
pub fn energy_density(stress: &[[f64; 4]; 4], velocity: [f64; 3]) -> f64 {
    let u = [
        energy(velocity),
        -velocity[0],
        -velocity[1],
        -velocity[2],
    ];
    let mut e = 0.0;
    for (mu, row) in stress.iter().enumerate() {
        for (nu, t) in row.iter().enumerate() {
            e += u[mu] * u[nu] * t;
        }
    }
    e
}

/// Isotropic pressure from the stress trace: 3 p = e - g_{mu nu} T^{mu nu}.
pub fn pressure(stress: &[[f64; 4]; 4], velocity: [f64; 3]) -> f64 {
    let trace = stress[0][0] - stress[1][1] - stress[2][2] - stress[3][3];
    (energy_density(stress, velocity) - trace) / 3.0
}

/// Entropy density in the frame of u: sigma = S^mu u_mu.
pub fn entropy_density(entropy_flux: &[f64; 4], velocity: [f64; 3]) -> f64 {
    energy(velocity) * entropy_flux[0]
        - velocity[0] * entropy_flux[1]
        - velocity[1] * entropy_flux[2]
        - velocity[2] * entropy_flux[3]
}
