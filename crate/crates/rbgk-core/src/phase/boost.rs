//! Lorentz boosts of momenta and of sampled distributions.
//!
//! A distribution function is a Lorentz scalar: under a boost that takes
//! the rest frame to 4-velocity u, the transformed field satisfies
//! f'(q') = f(q) with q the pre-image momentum. Resampling therefore pulls
//! each target node back through the inverse boost and interpolates the
//! source field trilinearly; pre-images outside the source box read as 0.

use super::field::DistributionField;
use super::grid::energy;

/// Applies the pure boost with 4-velocity (gamma, u) to the on-shell
/// momentum q (active transform: maps a particle at rest into one moving
/// with u).
pub fn boost_momentum(u: [f64; 3], q: [f64; 3]) -> [f64; 3] {
    let gamma = energy(u);
    let q0 = energy(q);
    let udotq = u[0] * q[0] + u[1] * q[1] + u[2] * q[2];
    let s = udotq / (gamma + 1.0) + q0;
    [q[0] + s * u[0], q[1] + s * u[1], q[2] + s * u[2]]
}

/// Trilinear interpolation of a field at an arbitrary momentum; zero
/// outside the grid hull.
pub fn interpolate(field: &DistributionField, q: [f64; 3]) -> f64 {
    let g = field.grid();
    let n = g.size();
    let step = g.step();
    let cutoff = g.cutoff();
    let mut base = [0usize; 3];
    let mut frac = [0.0f64; 3];
    for d in 0..3 {
        // Node i sits at -cutoff + (i + 0.5) step; t is the continuous
        // node coordinate of q along this axis.
        let t = (q[d] + cutoff) / step - 0.5;
        if t < 0.0 || t > (n - 1) as f64 {
            return 0.0;
        }
        let i = (t.floor() as usize).min(n - 2);
        base[d] = i;
        frac[d] = t - i as f64;
    }
    let vals = field.values();
    let mut acc = 0.0;
    for corner in 0..8 {
        let mut w = 1.0;
        let mut idx = [0usize; 3];
        for d in 0..3 {
            if corner >> d & 1 == 1 {
                idx[d] = base[d] + 1;
                w *= frac[d];
            } else {
                idx[d] = base[d];
                w *= 1.0 - frac[d];
            }
        }
        acc += w * vals[g.flat(idx[0], idx[1], idx[2])];
    }
    acc
}

/// Resamples a field into the frame boosted by 4-velocity u, on the same
/// grid. Accuracy is second order in the grid step; tails pulled in from
/// outside the source cutoff are truncated to zero.
pub fn boost_resample(field: &DistributionField, u: [f64; 3]) -> DistributionField {
    let minus_u = [-u[0], -u[1], -u[2]];
    let grid = field.grid_arc();
    DistributionField::from_fn(grid, |q, _| {
        let pre = boost_momentum(minus_u, q);
        interpolate(field, pre)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::grid::MomentumGrid;
    use std::sync::Arc;

    #[test]
    fn boost_preserves_mass_shell() {
        let u = [0.4, -0.2, 0.7];
        for q in [[0.0, 0.0, 0.0], [1.0, 2.0, -0.5], [-3.0, 0.1, 0.2]] {
            let qb = boost_momentum(u, q);
            // q^0 transforms as the time component of a 4-vector.
            let gamma = energy(u);
            let udotq = u[0] * q[0] + u[1] * q[1] + u[2] * q[2];
            let expected_e = gamma * energy(q) + udotq;
            assert!((energy(qb) - expected_e).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_boost_round_trips() {
        let u = [0.3, 0.5, -0.1];
        let q = [1.2, -0.7, 0.4];
        let back = boost_momentum([-u[0], -u[1], -u[2]], boost_momentum(u, q));
        for d in 0..3 {
            assert!((back[d] - q[d]).abs() < 1e-13);
        }
    }

    #[test]
    fn interpolation_reproduces_trilinear_functions() {
        let g = Arc::new(MomentumGrid::new(3.0, 12).unwrap());
        // A function that is exactly trilinear is reproduced inside the hull.
        let f = DistributionField::from_fn(g, |q, _| {
            1.0 + q[0] + 2.0 * q[1] * q[2] + q[0] * q[1] * q[2]
        });
        for q in [[0.3, -1.1, 0.9], [2.0, 2.0, -2.0], [-0.01, 0.02, 0.03]] {
            let exact = 1.0 + q[0] + 2.0 * q[1] * q[2] + q[0] * q[1] * q[2];
            assert!((interpolate(&f, q) - exact).abs() < 1e-12);
        }
        assert_eq!(interpolate(&f, [3.5, 0.0, 0.0]), 0.0);
    }
}
