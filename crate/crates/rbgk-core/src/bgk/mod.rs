//! Time integration of the dimensionless relativistic BGK equation
//!
//! ```text
//! d_t f + (q/q^0) . grad_x f = (1 / (eps q^0)) (J_f - f)
//! ```
//!
//! on a periodic 1D spatial domain (fully 3D in momentum), by operator
//! splitting of upwind transport and local relaxation, with conservation
//! and entropy diagnostics recorded every step.

pub mod evolve;
pub mod init;
pub mod relax;
pub mod transport;

pub use evolve::{bgk_evolve, ConservationLedger, LedgerRow, Trajectory};
pub use relax::{relax_field, relax_step, CollisionMode};
pub use transport::{transport_step, upwind_entropy_flux};

use crate::error::{Error, Result};
use crate::phase::field::KineticField1d;

/// Negative values above this threshold are clamped to zero (roundoff
/// debris); anything below aborts the run as a scheme failure.
pub const NEGATIVITY_ABORT: f64 = -1e-14;

/// Operator-splitting order for the two sub-steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    /// Transport then relax (first order; default, transport already is).
    Lie,
    /// Half transport, relax, half transport.
    Strang,
}

/// Run configuration for [`bgk_evolve`].
#[derive(Debug, Clone)]
pub struct BgkRunConfig {
    /// Relaxation parameter eps; 1 for the normalized model.
    pub epsilon: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Fraction of the hard stability bound dt <= dx the run may use.
    pub cfl_limit: f64,
    pub collision: CollisionMode,
    pub splitting: Splitting,
    /// Macroscopic per-cell states are recorded every this many steps
    /// (0 disables them; the conservation ledger is always per step).
    pub output_every: usize,
}

impl BgkRunConfig {
    /// Checks the configuration against a concrete initial state.
    pub fn validate(&self, f0: &KineticField1d) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        if !(self.cfl_limit > 0.0 && self.cfl_limit <= 1.0) {
            return Err(Error::Config(format!(
                "cfl_limit must lie in (0, 1], got {}",
                self.cfl_limit
            )));
        }
        if f0.x_cells() > 1 {
            // |q/q^0| < 1, so dt <= cfl_limit * dx bounds the Courant number.
            let dx = f0.dx();
            if self.dt > self.cfl_limit * dx * (1.0 + 1e-12) {
                return Err(Error::Config(format!(
                    "dt = {} exceeds cfl_limit * dx = {}",
                    self.dt,
                    self.cfl_limit * dx
                )));
            }
        }
        Ok(())
    }
}
