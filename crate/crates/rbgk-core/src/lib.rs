//! Numerical core for a relativistic BGK kinetic model in dimensionless
//! variables (particle mass, speed of light and Boltzmann constant all 1).
//!
//! A state is a phase-space density f(x, q) >= 0 over positions x in a
//! periodic 1D slab and momenta q in R^3, discretized on a uniform
//! midpoint-rule momentum lattice. On-shell energy is q0 = sqrt(1 + |q|^2)
//! and particle velocity is q/q0, so all transport speeds are subluminal.
//!
//! Module map:
//! - [`bessel`]: modified Bessel kernels K0, K1, K2, the ratio K1/K2 and its
//!   inverse, plus the scalar kernels M, Psi, chi built from them.
//! - [`phase`]: momentum grids, distribution fields, moment integrals,
//!   the macroscopic closure, Lorentz boosts, snapshot serialization.
//! - [`juttner`]: relativistic equilibrium (Juttner) distributions, the
//!   moment-identity battery with grid certification, discrete equilibrium
//!   fits, and the free-energy comparison.
//! - [`bgk`]: the BGK relaxation + upwind transport solver with its
//!   conservation ledger.
//! - [`limits`]: non-relativistic, ultra-relativistic and hydrodynamic
//!   (Euler) limit studies with convergence-order fits.
//! - [`linop`]: the collision operator linearized about a global
//!   equilibrium: projector algebra, dense matrices, the Hilbert-Schmidt
//!   kernel, the nonlinear remainder, and mode-wise semigroup evolution.

pub mod bessel;
pub mod bgk;
pub mod error;
pub mod juttner;
pub mod limits;
pub mod linop;
pub mod phase;
pub mod quad;

pub use bgk::{bgk_evolve, BgkRunConfig, CollisionMode, ConservationLedger, Trajectory};
pub use limits::{fitted_order, ClassicalState, UltraRelState};
pub use linop::{apply_projector, Equilibrium0};
pub use error::{Error, Result};
pub use phase::field::{DistributionField, KineticField1d};
pub use phase::grid::MomentumGrid;
pub use phase::moments::MacroState;

/// Crate version, for embedding in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
