//! Initial-data builders for kinetic runs.

use crate::error::Result;
use crate::juttner::params::JuttnerParams;
use crate::phase::field::{DistributionField, KineticField1d};
use crate::phase::grid::MomentumGrid;
use rayon::prelude::*;
use std::sync::Arc;

/// Sum of two drifting equilibria on one momentum grid; the standard
/// far-from-equilibrium homogeneous test state.
pub fn two_beam(
    grid: &Arc<MomentumGrid>,
    a: &JuttnerParams,
    b: &JuttnerParams,
) -> Result<DistributionField> {
    let sa = a.sampler()?;
    let sb = b.sampler()?;
    Ok(DistributionField::from_fn(Arc::clone(grid), |q, q0| {
        sa.value(q, q0) + sb.value(q, q0)
    }))
}

/// A 1D column of local equilibria: cell c is sampled from
/// `profile(x_c)` where x_c is the cell center. The sampler (and its
/// Bessel normalization) is built once per cell, not per node.
pub fn equilibrium_column(
    grid: &Arc<MomentumGrid>,
    x_cells: usize,
    length: f64,
    profile: impl Fn(f64) -> JuttnerParams + Sync,
) -> Result<KineticField1d> {
    let mut field = KineticField1d::zeros(Arc::clone(grid), x_cells, length)?;
    let g = Arc::clone(grid);
    let dx = field.dx();
    let results: Result<Vec<()>> = field
        .par_cells_mut()
        .map(|(c, cell)| {
            let x = (c as f64 + 0.5) * dx;
            let sampler = profile(x).sampler()?;
            for (idx, v) in cell.iter_mut().enumerate() {
                let q = g.node(idx);
                let q0 = (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
                *v = sampler.value(q, q0);
            }
            Ok(())
        })
        .collect();
    results?;
    Ok(field)
}

/// Wraps a homogeneous distribution into a single-cell kinetic field so it
/// can be fed to the split-step driver (transport is the identity there).
pub fn homogeneous(f: &DistributionField) -> Result<KineticField1d> {
    let mut out = KineticField1d::zeros(f.grid_arc(), 1, 1.0)?;
    out.cell_mut(0).copy_from_slice(f.values());
    Ok(out)
}

/// Smooth periodic profile used by the hydrodynamic-limit experiments:
/// density, velocity, and inverse-temperature waves with O(0.1) amplitudes.
pub fn smooth_wave_profile(x: f64) -> JuttnerParams {
    let two_pi = 2.0 * std::f64::consts::PI;
    let n = 1.0 + 0.15 * (two_pi * x).sin();
    let u1 = 0.08 * (two_pi * x + 0.4).sin();
    let beta = 2.0 * (1.0 + 0.1 * (two_pi * x).cos());
    JuttnerParams::new(n, beta, [u1, 0.0, 0.0]).expect("wave amplitudes keep parameters valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::moments;

    #[test]
    fn two_beam_mass_is_the_sum_of_beam_masses() {
        // Grid sized so truncation and lattice error sit near 1e-7.
        let grid = Arc::new(MomentumGrid::new(18.0, 120).unwrap());
        let a = JuttnerParams::new(0.8, 1.6, [0.45, 0.0, 0.0]).unwrap();
        let b = JuttnerParams::new(0.7, 2.3, [-0.35, 0.2, 0.0]).unwrap();
        let f = two_beam(&grid, &a, &b).unwrap();
        let m = f.moments();
        let expect = 0.8 * a.gamma() + 0.7 * b.gamma();
        assert!(
            (m.current[0] - expect).abs() < 1e-5 * expect,
            "N^0 = {:.8e} vs {:.8e}",
            m.current[0],
            expect
        );
    }

    #[test]
    fn column_cells_match_their_profile_parameters() {
        let grid = Arc::new(MomentumGrid::new(16.0, 96).unwrap());
        let col = equilibrium_column(&grid, 8, 2.0, |x| {
            JuttnerParams::new(1.0 + 0.3 * x, 2.0, [0.05, 0.0, 0.0]).unwrap()
        })
        .unwrap();
        for c in [0usize, 3, 7] {
            let x = col.x_center(c);
            let state = moments::macro_from_f(&grid, col.cell(c)).unwrap();
            assert!(
                (state.density - (1.0 + 0.3 * x)).abs() < 1e-5,
                "cell {c}: n = {} vs {}",
                state.density,
                1.0 + 0.3 * x
            );
            assert!((state.beta - 2.0).abs() < 1e-4, "cell {c}: beta = {}", state.beta);
        }
    }

    #[test]
    fn homogeneous_wrapper_preserves_values() {
        let grid = Arc::new(MomentumGrid::new(9.0, 12).unwrap());
        let p = JuttnerParams::new(1.0, 2.0, [0.1, -0.05, 0.0]).unwrap();
        let f = DistributionField::from_fn(Arc::clone(&grid), |q, q0| {
            p.sampler().unwrap().value(q, q0)
        });
        let wrapped = homogeneous(&f).unwrap();
        assert_eq!(wrapped.x_cells(), 1);
        assert_eq!(wrapped.cell(0), f.values());
    }
}
