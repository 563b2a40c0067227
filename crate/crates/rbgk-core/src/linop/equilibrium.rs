//! The global equilibrium a linearization is anchored to.
//!
//! The reference state is the unit-density, zero-velocity Juttner
//! distribution, parametrized either by its inverse temperature beta0 or
//! by the moment ratio alpha0 = K1/K2 in one-to-one correspondence with
//! it. Alongside the analytic constants (Psi, kappa), the struct carries
//! the grid-summed counterparts of the same quantities: the projector
//! built from those makes the discrete algebra close exactly (projection,
//! self-adjointness, kernel identities hold to roundoff on any grid, not
//! just to quadrature accuracy), and they converge to the analytic values
//! under grid refinement.

use crate::bessel;
use crate::error::{Error, Result};
use crate::juttner::JuttnerParams;
use crate::phase::grid::MomentumGrid;
use crate::phase::moments::field_sums;
use std::sync::Arc;

/// Grids whose J0 mass defect exceeds this are rejected outright; below
/// it the defect is recorded and the samples renormalized.
const MASS_DEFECT_LIMIT: f64 = 0.5;

/// Reference Juttner state J0 = exp(-beta0 q0)/M(beta0) with its grid
/// samples and the constants the linearized operator needs.
#[derive(Debug, Clone)]
pub struct Equilibrium0 {
    grid: Arc<MomentumGrid>,
    /// Moment ratio K1/K2 at beta0, in (0, 1).
    pub alpha0: f64,
    /// Inverse temperature of the reference state.
    pub beta0: f64,
    /// Psi(beta0) = K1/K2 + 3/beta0, the energy per particle.
    pub psi0: f64,
    /// kappa0 = 3 alpha0/beta0 + alpha0^2 - 1 = 1/X'(alpha0) > 0.
    pub kappa0: f64,
    /// J0 samples, renormalized so the grid sum is exactly 1.
    pub j0: Vec<f64>,
    /// sqrt(J0) samples (of the renormalized J0).
    pub sqrt_j0: Vec<f64>,
    /// |grid mass of the analytic J0 - 1|: the quadrature defect of the
    /// grid for this state. Small on well-sized grids.
    pub norm_defect: f64,
    /// Grid sum of J0/q0 (discrete alpha0).
    pub alpha_hat: f64,
    /// Grid sum of q0 J0 (discrete Psi).
    pub psi_hat: f64,
    /// alpha_hat * psi_hat - 1 (discrete kappa); positive.
    pub kappa_hat: f64,
    /// Grid sum of |q|^2 J0 / (3 q0) (discrete pressure, approaches
    /// 1/beta0).
    pub p_hat: f64,
    /// Log of the renormalized partition constant Z, so that
    /// J0(q) = exp(-beta0 q0 - ln_z) off-grid as well as on.
    pub ln_z: f64,
}

impl Equilibrium0 {
    /// Builds the reference state from its inverse temperature.
    pub fn from_beta(grid: Arc<MomentumGrid>, beta0: f64) -> Result<Self> {
        let alpha0 = bessel::ratio_k1k2(beta0)?;
        Self::build(grid, alpha0, beta0)
    }

    /// Builds the reference state from the moment ratio alpha0 in (0, 1).
    pub fn from_alpha(grid: Arc<MomentumGrid>, alpha0: f64) -> Result<Self> {
        if !(alpha0 > 0.0 && alpha0 < 1.0) {
            return Err(Error::domain(format!("alpha0 must lie in (0, 1), got {alpha0}")));
        }
        let beta0 = bessel::inverse_ratio(alpha0)?;
        Self::build(grid, alpha0, beta0)
    }

    fn build(grid: Arc<MomentumGrid>, alpha0: f64, beta0: f64) -> Result<Self> {
        let psi0 = alpha0 + 3.0 / beta0;
        let kappa0 = 3.0 * alpha0 / beta0 + alpha0 * alpha0 - 1.0;
        if !(kappa0 > 0.0) {
            return Err(Error::NonPhysical(format!(
                "kappa0 = {kappa0} must be positive (beta0 = {beta0})"
            )));
        }
        let mut j0 = JuttnerParams::new(1.0, beta0, [0.0; 3])?.sample_on(&grid)?;
        let mass = field_sums::<1>(&grid, &j0, |_, _, v| [v])[0];
        let norm_defect = (mass - 1.0).abs();
        if !(norm_defect < MASS_DEFECT_LIMIT) {
            return Err(Error::domain(format!(
                "grid resolves only {mass:.3} of the unit reference mass; enlarge it"
            )));
        }
        let ln_z = bessel::ln_normalization(beta0)? + mass.ln();
        for v in j0.iter_mut() {
            *v /= mass;
        }
        let sqrt_j0: Vec<f64> = j0.iter().map(|&v| v.sqrt()).collect();
        let s = field_sums::<3>(&grid, &j0, |q, q0, v| {
            [v / q0, q0 * v, (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]) * v / (3.0 * q0)]
        });
        let (alpha_hat, psi_hat, p_hat) = (s[0], s[1], s[2]);
        let kappa_hat = alpha_hat * psi_hat - 1.0;
        if !(kappa_hat > 0.0 && p_hat > 0.0) {
            return Err(Error::NonPhysical(format!(
                "degenerate grid constants: kappa_hat = {kappa_hat}, p_hat = {p_hat}"
            )));
        }
        Ok(Self {
            grid,
            alpha0,
            beta0,
            psi0,
            kappa0,
            j0,
            sqrt_j0,
            norm_defect,
            alpha_hat,
            psi_hat,
            kappa_hat,
            p_hat,
            ln_z,
        })
    }

    /// J0 at an arbitrary momentum (consistent with the grid samples).
    pub fn j0_at(&self, q: [f64; 3]) -> f64 {
        let q0 = (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
        (-self.beta0 * q0 - self.ln_z).exp()
    }

    /// sqrt(J0) at an arbitrary momentum.
    pub fn sqrt_j0_at(&self, q: [f64; 3]) -> f64 {
        let q0 = (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
        (-0.5 * (self.beta0 * q0 + self.ln_z)).exp()
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> Arc<MomentumGrid> {
        Arc::clone(&self.grid)
    }

    /// The five-dimensional collision-invariant space: sqrt(J0) and
    /// q^mu sqrt(J0), ordered [sqrt(J0), q0 sqrt(J0), q1.., q2.., q3..].
    pub fn invariant_basis(&self) -> [Vec<f64>; 5] {
        let n = self.grid.total();
        let mut basis = [(); 5].map(|_| vec![0.0; n]);
        for (idx, &s) in self.sqrt_j0.iter().enumerate() {
            let q = self.grid.node(idx);
            let q0 = (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
            basis[0][idx] = s;
            basis[1][idx] = q0 * s;
            basis[2][idx] = q[0] * s;
            basis[3][idx] = q[1] * s;
            basis[4][idx] = q[2] * s;
        }
        basis
    }

    /// Plain L2 pairing: weight * sum f g.
    pub fn ip_plain(&self, f: &[f64], g: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), g.len());
        let s: f64 = f.iter().zip(g).map(|(a, b)| a * b).sum();
        s * self.grid.weight()
    }

    /// Energy-weighted pairing: weight * sum f g / q0.
    pub fn ip_weighted(&self, f: &[f64], g: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), g.len());
        let s: f64 = f
            .iter()
            .zip(g)
            .enumerate()
            .map(|(idx, (a, b))| {
                let q = self.grid.node(idx);
                a * b / (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt()
            })
            .sum();
        s * self.grid.weight()
    }

    /// Plain L2 norm.
    pub fn norm_plain(&self, f: &[f64]) -> f64 {
        self.ip_plain(f, f).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fine_grid() -> Arc<MomentumGrid> {
        Arc::new(MomentumGrid::new(9.0, 64).unwrap())
    }

    #[test]
    fn discrete_constants_converge_to_the_analytic_ones() {
        // Truncation decays like exp(-beta(sqrt(1 + Q^2) - 1)) while the
        // lattice-sum (aliasing) error decays like exp(-sqrt(beta^2 +
        // (2 pi / h)^2)), the rate fixed by the q^2 = -1 branch point of
        // q0 rather than by the temperature. Q = 26, h = 0.41 puts both
        // below 1e-8 at beta0 = 1; kappa amplifies the alpha gap by Psi.
        let g = Arc::new(MomentumGrid::new(26.0, 128).unwrap());
        let eq = Equilibrium0::from_beta(g, 1.0).unwrap();
        assert!(eq.norm_defect < 5e-9, "defect {:.3e}", eq.norm_defect);
        let a = (eq.alpha_hat - eq.alpha0).abs();
        assert!(a < 5e-8, "alpha gap {a:.3e}");
        let s = (eq.psi_hat - eq.psi0).abs();
        assert!(s < 1e-8, "psi gap {s:.3e}");
        let k = (eq.kappa_hat - eq.kappa0).abs();
        assert!(k < 2e-7, "kappa gap {k:.3e}");
        let p = (eq.p_hat - 1.0 / eq.beta0).abs();
        assert!(p < 2e-8, "p gap {p:.3e}");
    }

    #[test]
    fn off_grid_evaluation_matches_the_samples() {
        let eq = Equilibrium0::from_beta(fine_grid(), 1.7).unwrap();
        for idx in [0, 31, 4321, eq.j0.len() - 1] {
            let q = eq.grid().node(idx);
            assert!((eq.j0_at(q) - eq.j0[idx]).abs() <= 1e-14 * eq.j0[idx]);
            assert!((eq.sqrt_j0_at(q) - eq.sqrt_j0[idx]).abs() <= 1e-14 * eq.sqrt_j0[idx]);
        }
    }

    #[test]
    fn alpha_and_beta_constructions_agree() {
        let g = fine_grid();
        let a = Equilibrium0::from_beta(Arc::clone(&g), 2.0).unwrap();
        let b = Equilibrium0::from_alpha(g, a.alpha0).unwrap();
        assert!((b.beta0 - 2.0).abs() < 1e-8, "beta {:.12}", b.beta0);
        assert_eq!(a.j0.len(), b.j0.len());
    }

    #[test]
    fn renormalized_mass_is_exactly_one() {
        let eq = Equilibrium0::from_beta(Arc::new(MomentumGrid::new(4.0, 12).unwrap()), 1.0)
            .unwrap();
        let mass = field_sums::<1>(eq.grid(), &eq.j0, |_, _, v| [v])[0];
        assert!((mass - 1.0).abs() < 1e-14, "mass {mass:.16}");
        // A 12-per-axis lattice carries a visible quadrature defect.
        assert!(eq.norm_defect > 1e-6);
    }

    #[test]
    fn undersized_grids_are_rejected() {
        let tiny = Arc::new(MomentumGrid::new(0.3, 4).unwrap());
        assert!(Equilibrium0::from_beta(tiny, 0.05).is_err());
        let g = fine_grid();
        assert!(Equilibrium0::from_alpha(g, 1.2).is_err());
    }
}
