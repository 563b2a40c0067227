//! Momentum-space discretization and everything defined directly on it:
//! grids, distribution storage, moment reductions, Lorentz boosts of
//! sampled distributions, and snapshot I/O.

pub mod boost;
pub mod field;
pub mod grid;
pub mod moments;
pub mod snapshot;
