//! Quantitative studies of the model's three asymptotic regimes.
//!
//! Each study builds states on an epsilon ladder, measures a deviation
//! metric per rung, and reports the least-squares convergence order. The
//! expansions behind the limits carry unquantified constants, so the
//! assertions live on measured orders rather than symbolic remainders:
//! - slow particles: the equilibrium approaches a classical Maxwellian
//!   and the closure temperature matches the kinetic-theory one
//!   ([`nonrel`], order 2 in the speed ratio);
//! - negligible rest mass: the equilibrium approaches its massless form
//!   and energy approaches three times pressure ([`ultrarel`]);
//! - fast collisions: the macroscopic fields of kinetic runs satisfy the
//!   relativistic Euler system up to a residual that shrinks with the
//!   relaxation time ([`euler`]).

pub mod classical;
pub mod euler;
pub mod nonrel;
pub mod orderfit;
pub mod ultrarel;

pub use classical::ClassicalState;
pub use euler::{euler_limit_study, euler_residual, EulerResidualRow, EulerStudyRow};
pub use nonrel::{nr_limit_study, rest_energy_decomposition, NrStudyRow};
pub use orderfit::fitted_order;
pub use ultrarel::{ur_limit_study, UltraRelState, UrStudyRow};
