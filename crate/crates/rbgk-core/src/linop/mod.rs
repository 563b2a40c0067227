//! Linearization of the relaxation operator around a global equilibrium.
//!
//! Writing f = J0 + sqrt(J0) h and dropping the quadratic remainder turns
//! the relaxation term into L h = (P - I) h / q0, where P is the
//! q0-weighted orthogonal projection onto the five collision invariants
//! multiplied by sqrt(J0). This module builds the reference state and its
//! grid constants ([`Equilibrium0`]), applies and assembles P and L
//! ([`apply_projector`], [`assemble_projector`], [`assemble_linearized`]),
//! exposes the compact part of L with its integral kernel ([`hs_kernel`]),
//! measures the quadratic remainder that linearization discards
//! ([`nonlinear_remainder`]), and integrates the linearized equation mode
//! by mode with an unconditionally contractive scheme
//! ([`evolve_fourier_mode`], [`solve_linearized_ivp`]).

mod equilibrium;
mod gamma;
mod matrices;
mod projector;
mod semigroup;

pub use equilibrium::Equilibrium0;
pub use gamma::{nonlinear_remainder, taylor_linear_terms};
pub use matrices::{
    assemble_compact_part, assemble_hs_matrix, assemble_linearized, assemble_mode_generator,
    assemble_projector, hs_kernel, read_matrix, write_matrix, DENSE_NODE_CAP, MATRIX_MAGIC,
};
pub use projector::{apply_projector, macro_of_perturbed, signed_moments, SignedMoments};
pub use semigroup::{
    evolve_fourier_mode, solve_linearized_ivp, IvpTrajectory, ModeTrajectory, CONTRACTION_SLACK,
};
