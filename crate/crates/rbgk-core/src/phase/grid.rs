//! Uniform cubic midpoint grids in momentum space.
//!
//! The grid covers [-Q, Q]^3 with N midpoint nodes per axis (N even), so no
//! node sits at the origin and the node set is exactly symmetric under
//! q -> -q in floating point: node coordinates are computed as
//! `step * (i + 0.5 - N/2)`, a product of the step with an exactly
//! representable half-integer. Quadrature is the plain product midpoint
//! rule with weight `step^3` per node; for the analytic integrands used
//! here (entire in each momentum component, nearest complex singularity of
//! 1/q^0 at distance ~1 from the real axis) it converges geometrically in
//! 1/step until the cutoff tail takes over.

use crate::bessel;
use crate::error::{Error, Result};

/// Cubic midpoint grid on [-cutoff, cutoff]^3.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    cutoff: f64,
    n: usize,
    step: f64,
    axis: Vec<f64>,
}

impl MomentumGrid {
    /// Builds an N^3 midpoint grid. N must be even and at least 2 so that
    /// the node set avoids the origin and is sign-symmetric.
    pub fn new(cutoff: f64, n: usize) -> Result<Self> {
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(Error::domain(format!("grid cutoff must be positive, got {cutoff}")));
        }
        if n < 2 || n % 2 != 0 {
            return Err(Error::domain(format!("grid size must be even and >= 2, got {n}")));
        }
        let step = 2.0 * cutoff / n as f64;
        let half = n as f64 / 2.0;
        let axis: Vec<f64> = (0..n).map(|i| step * (i as f64 + 0.5 - half)).collect();
        debug_assert!(axis.iter().zip(axis.iter().rev()).all(|(a, b)| *a == -*b));
        Ok(MomentumGrid { cutoff, n, step, axis })
    }

    /// Grid sized from the two error mechanisms of the midpoint rule on a
    /// thermal distribution at inverse temperature `beta` drifting with
    /// spatial 4-velocity magnitude up to `speed`: the cutoff is chosen so
    /// the neglected tail of the slowest-decaying low moments sits below
    /// `rel_tol`, and the node count so the aliasing error (set by the
    /// distance ~1 to the complex singularities of 1/q^0) does too.
    ///
    /// The rule is a default for routine use; demanding studies should size
    /// grids by explicit refinement.
    pub fn sized_for(beta: f64, speed: f64, rel_tol: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) || speed < 0.0 || !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::domain(format!(
                "bad sizing request: beta = {beta}, speed = {speed}, rel_tol = {rel_tol}"
            )));
        }
        let target = (1.0 / rel_tol).ln();
        let gamma = (1.0 + speed * speed).sqrt();
        // Exponent of the neglected tail at radius Q (worst direction),
        // reduced by the amplitude-to-density ratio and the angular
        // localization of the drift term, inflated by a polynomial factor
        // for the low moments.
        let khat2 = bessel::bessel_k_scaled(2, beta)?;
        let amp = (4.0 * std::f64::consts::PI * khat2 / beta).ln();
        let gap = |q: f64| {
            let tail = beta * (gamma * (1.0 + q * q).sqrt() - speed * q - 1.0);
            tail + amp + (beta * q * speed).ln_1p() - target - 2.0 * (1.0 + q).ln()
        };
        let mut lo = 1e-3;
        let mut hi = 1e4;
        if gap(hi) < 0.0 {
            return Err(Error::Convergence(format!(
                "no cutoff below {hi} reaches rel_tol {rel_tol} at beta {beta}"
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = 1.25 * hi;
        let n = (q * (beta + target + 4.0) / std::f64::consts::PI).ceil() as usize;
        Self::new(q, n + n % 2)
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Nodes per axis.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Total node count N^3.
    pub fn total(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    /// Quadrature weight per node (cell volume).
    pub fn weight(&self) -> f64 {
        self.step * self.step * self.step
    }

    /// Flat index of node (i, j, k); the last axis varies fastest.
    #[inline]
    pub fn flat(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// Node coordinates from the flat index.
    #[inline]
    pub fn node(&self, flat: usize) -> [f64; 3] {
        let k = flat % self.n;
        let j = (flat / self.n) % self.n;
        let i = flat / (self.n * self.n);
        [self.axis[i], self.axis[j], self.axis[k]]
    }
}

/// Relativistic kinetic energy coordinate q^0 = sqrt(1 + |q|^2).
#[inline]
pub fn energy(q: [f64; 3]) -> f64 {
    (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt()
}

/// Characteristic velocity q/q^0, each component in (-1, 1).
#[inline]
pub fn unit_velocity(q: [f64; 3]) -> [f64; 3] {
    let e = energy(q);
    [q[0] / e, q[1] / e, q[2] / e]
}
