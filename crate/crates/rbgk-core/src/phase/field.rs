//! Distribution storage: a single momentum-space field and a periodic 1D
//! column of them for spatially inhomogeneous runs.

use super::grid::MomentumGrid;
use super::moments::{self, MacroState, Moments};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::sync::Arc;

/// A distribution function sampled on one momentum grid (one spatial cell
/// or a homogeneous state). Values are stored in the grid's flat order.
#[derive(Debug, Clone)]
pub struct DistributionField {
    grid: Arc<MomentumGrid>,
    values: Vec<f64>,
}

impl DistributionField {
    pub fn zeros(grid: Arc<MomentumGrid>) -> Self {
        let values = vec![0.0; grid.total()];
        DistributionField { grid, values }
    }

    /// Samples `f(q, q0)` at every node, parallel over i-planes.
    pub fn from_fn(grid: Arc<MomentumGrid>, f: impl Fn([f64; 3], f64) -> f64 + Sync) -> Self {
        let n = grid.size();
        let axis = grid.axis();
        let mut values = vec![0.0; grid.total()];
        values
            .par_chunks_mut(n * n)
            .enumerate()
            .for_each(|(i, plane)| {
                let qx = axis[i];
                let mut idx = 0;
                for &qy in axis {
                    let s2 = qx * qx + qy * qy;
                    for &qz in axis {
                        let q0 = (1.0 + s2 + qz * qz).sqrt();
                        plane[idx] = f([qx, qy, qz], q0);
                        idx += 1;
                    }
                }
            });
        DistributionField { grid, values }
    }

    pub fn from_values(grid: Arc<MomentumGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.total() {
            return Err(Error::domain(format!(
                "field length {} does not match grid total {}",
                values.len(),
                grid.total()
            )));
        }
        Ok(DistributionField { grid, values })
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> Arc<MomentumGrid> {
        Arc::clone(&self.grid)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn moments(&self) -> Moments {
        moments::moments_of(&self.grid, &self.values)
    }

    pub fn macro_state(&self) -> Result<MacroState> {
        moments::macro_from_f(&self.grid, &self.values)
    }

    /// Smallest value (for positivity checks).
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// A periodic 1D spatial column of distributions sharing one momentum
/// grid. Cell c is centered at x = (c + 0.5) * dx with dx = length / cells.
#[derive(Debug, Clone)]
pub struct KineticField1d {
    grid: Arc<MomentumGrid>,
    x_cells: usize,
    length: f64,
    values: Vec<f64>,
}

impl KineticField1d {
    pub fn zeros(grid: Arc<MomentumGrid>, x_cells: usize, length: f64) -> Result<Self> {
        if x_cells == 0 || !(length > 0.0) {
            return Err(Error::domain(format!(
                "need at least one cell and positive length, got {x_cells} cells, length {length}"
            )));
        }
        let values = vec![0.0; x_cells * grid.total()];
        Ok(KineticField1d { grid, x_cells, length, values })
    }

    /// Samples `f(x, q, q0)` at every cell center and node, parallel over cells.
    pub fn from_fn(
        grid: Arc<MomentumGrid>,
        x_cells: usize,
        length: f64,
        f: impl Fn(f64, [f64; 3], f64) -> f64 + Sync,
    ) -> Result<Self> {
        let mut out = Self::zeros(grid, x_cells, length)?;
        let dx = out.dx();
        let g = Arc::clone(&out.grid);
        out.values
            .par_chunks_mut(g.total())
            .enumerate()
            .for_each(|(c, cell)| {
                let x = (c as f64 + 0.5) * dx;
                for (idx, v) in cell.iter_mut().enumerate() {
                    let q = g.node(idx);
                    let q0 = (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
                    *v = f(x, q, q0);
                }
            });
        Ok(out)
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> Arc<MomentumGrid> {
        Arc::clone(&self.grid)
    }

    pub fn x_cells(&self) -> usize {
        self.x_cells
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.x_cells as f64
    }

    pub fn x_center(&self, c: usize) -> f64 {
        (c as f64 + 0.5) * self.dx()
    }

    pub fn cell(&self, c: usize) -> &[f64] {
        let t = self.grid.total();
        &self.values[c * t..(c + 1) * t]
    }

    pub fn cell_mut(&mut self, c: usize) -> &mut [f64] {
        let t = self.grid.total();
        &mut self.values[c * t..(c + 1) * t]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Parallel iteration over (cell index, cell slice).
    pub fn par_cells_mut(&mut self) -> impl IndexedParallelIterator<Item = (usize, &mut [f64])> {
        let t = self.grid.total();
        self.values.par_chunks_mut(t).enumerate()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}
