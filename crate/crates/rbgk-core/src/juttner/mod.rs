//! The relativistic thermal equilibrium family: stable evaluation, the
//! moment-matching closure that produces the local equilibrium of a given
//! distribution, the free-energy gap functional, and a streaming battery
//! of analytic moment identities for grid certification.

pub mod fit;
pub mod free_energy;
pub mod params;
pub mod verify;

pub use fit::{fit_equilibrium, ClosureOutput, CLOSURE_TOL};
pub use params::{JuttnerParams, JuttnerSampler};
