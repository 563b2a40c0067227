//! Signed moments of perturbations and the projector onto the
//! collision-invariant space.
//!
//! Perturbations h = f sqrt(J0) may change sign, so the macroscopic
//! symbols n_h, u_h, alpha_h only appear through the four integral
//! combinations defined here; those stay meaningful for any sign.

use super::equilibrium::Equilibrium0;
use crate::error::{Error, Result};
use crate::phase::moments::field_sums;

/// The four moment aggregates of a signed perturbation h:
/// m_density = integral h, m_flux = integral q h / q0,
/// m_alpha = integral h / q0, and m_nsq = m_density^2 - |m_flux|^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedMoments {
    /// n_h sqrt(1 + |u_h|^2).
    pub m_density: f64,
    /// n_h u_h.
    pub m_flux: [f64; 3],
    /// n_h alpha_h.
    pub m_alpha: f64,
    /// n_h^2 (sign indefinite for signed h).
    pub m_nsq: f64,
}

/// Grid moments of a signed momentum function.
pub fn signed_moments(eq: &Equilibrium0, h: &[f64]) -> SignedMoments {
    let s = field_sums::<5>(eq.grid(), h, |q, q0, v| {
        [v, q[0] * v / q0, q[1] * v / q0, q[2] * v / q0, v / q0]
    });
    let m_flux = [s[1], s[2], s[3]];
    SignedMoments {
        m_density: s[0],
        m_flux,
        m_alpha: s[4],
        m_nsq: s[0] * s[0] - (s[1] * s[1] + s[2] * s[2] + s[3] * s[3]),
    }
}

/// Macroscopic quantities of the perturbed state g = J0 + h:
/// (n_g, n_g u_g, n_g alpha_g).
///
/// n_g = sqrt(1 + n_h^2 + 2 m_density), n_g u_g = m_flux,
/// n_g alpha_g = alpha0 + m_alpha. Fails when the radicand is not
/// positive (the perturbation pushes the current off the timelike cone).
pub fn macro_of_perturbed(eq: &Equilibrium0, h: &[f64]) -> Result<(f64, [f64; 3], f64)> {
    let m = signed_moments(eq, h);
    // The time component of the perturbed current is 1 + m_density; a
    // non-positive value means the candidate state has no physical
    // density regardless of the invariant below.
    if !(1.0 + m.m_density > 0.0) {
        return Err(Error::NonPhysical(format!(
            "perturbed particle density 1 + m_density = {:.3e} is not positive",
            1.0 + m.m_density
        )));
    }
    let radicand = 1.0 + m.m_nsq + 2.0 * m.m_density;
    if !(radicand > 0.0) {
        return Err(Error::NonTimelike(format!(
            "perturbed current is not timelike: 1 + n_h^2 + 2 m_density = {radicand:.3e}"
        )));
    }
    let n_g = radicand.sqrt();
    Ok((n_g, m.m_flux, eq.alpha_hat + m.m_alpha))
}

/// Projection coefficients (A, B, C) of one perturbation, so that
/// P(f) = [A + B q0 + C . q] sqrt(J0).
pub(crate) fn projection_coefficients(eq: &Equilibrium0, m: &SignedMoments) -> (f64, f64, [f64; 3]) {
    let a = (eq.psi_hat * m.m_alpha - m.m_density) / eq.kappa_hat;
    let b = (eq.alpha_hat * m.m_density - m.m_alpha) / eq.kappa_hat;
    let c = [m.m_flux[0] / eq.p_hat, m.m_flux[1] / eq.p_hat, m.m_flux[2] / eq.p_hat];
    (a, b, c)
}

/// Orthogonal projection of f onto span{sqrt(J0), q^mu sqrt(J0)} in the
/// 1/q0-weighted inner product.
///
/// Built from the grid-summed equilibrium constants, so projecting twice
/// reproduces the result to roundoff on any grid; the coefficients agree
/// with the analytic ones (Psi, kappa0, beta0) to quadrature accuracy.
pub fn apply_projector(eq: &Equilibrium0, f: &[f64]) -> Vec<f64> {
    let h: Vec<f64> = f.iter().zip(&eq.sqrt_j0).map(|(a, b)| a * b).collect();
    let m = signed_moments(eq, &h);
    let (a, b, c) = projection_coefficients(eq, &m);
    let grid = eq.grid();
    let mut out = vec![0.0; f.len()];
    for (idx, o) in out.iter_mut().enumerate() {
        let q = grid.node(idx);
        let q0 = (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
        *o = (a + b * q0 + c[0] * q[0] + c[1] * q[1] + c[2] * q[2]) * eq.sqrt_j0[idx];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::grid::MomentumGrid;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;
    use std::sync::Arc;

    fn eq0() -> Equilibrium0 {
        let g = Arc::new(MomentumGrid::new(5.5, 24).unwrap());
        Equilibrium0::from_beta(g, 1.3).unwrap()
    }

    fn random_vec(eq: &Equilibrium0, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..eq.grid().total()).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn moments_are_linear_in_the_input() {
        let eq = eq0();
        let h1 = random_vec(&eq, 1);
        let h2 = random_vec(&eq, 2);
        let combo: Vec<f64> =
            h1.iter().zip(&h2).map(|(a, b)| 0.7 * a - 1.9 * b).collect();
        let (m1, m2, mc) =
            (signed_moments(&eq, &h1), signed_moments(&eq, &h2), signed_moments(&eq, &combo));
        let lin = |a: f64, b: f64| 0.7 * a - 1.9 * b;
        assert!((mc.m_density - lin(m1.m_density, m2.m_density)).abs() < 1e-12);
        assert!((mc.m_alpha - lin(m1.m_alpha, m2.m_alpha)).abs() < 1e-12);
        for d in 0..3 {
            assert!((mc.m_flux[d] - lin(m1.m_flux[d], m2.m_flux[d])).abs() < 1e-12);
        }
    }

    #[test]
    fn even_perturbations_have_no_flux() {
        // Summation order differs between mirror planes, so the odd
        // moments cancel to roundoff rather than bitwise.
        let eq = eq0();
        let m = signed_moments(&eq, &eq.sqrt_j0);
        for d in 0..3 {
            assert!(m.m_flux[d].abs() < 1e-15, "flux {d}: {:.3e}", m.m_flux[d]);
        }
        assert!(m.m_density > 0.0 && m.m_alpha > 0.0);
        let zero = signed_moments(&eq, &vec![0.0; eq.grid().total()]);
        assert_eq!(zero.m_density, 0.0);
        assert_eq!(zero.m_nsq, 0.0);
    }

    #[test]
    fn unperturbed_macro_quantities_are_the_reference_ones() {
        let eq = eq0();
        let (n_g, flux, alpha_g) = macro_of_perturbed(&eq, &vec![0.0; eq.grid().total()]).unwrap();
        assert_eq!(n_g, 1.0);
        assert_eq!(flux, [0.0; 3]);
        assert!((alpha_g - eq.alpha_hat).abs() < 1e-15);
    }

    #[test]
    fn perturbed_density_matches_the_direct_moment_route() {
        // For g = J0 + h >= 0 the defining formula for n_g must agree
        // with sqrt(N^mu N_mu) computed from g directly.
        let eq = eq0();
        let grid = eq.grid();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let h: Vec<f64> =
            eq.j0.iter().map(|&j| j * rng.random_range(-0.4..0.4)).collect();
        let g: Vec<f64> = eq.j0.iter().zip(&h).map(|(a, b)| a + b).collect();
        let (n_g, flux, alpha_g) = macro_of_perturbed(&eq, &h).unwrap();
        let s = field_sums::<5>(grid, &g, |q, q0, v| {
            [v, q[0] * v / q0, q[1] * v / q0, q[2] * v / q0, v / q0]
        });
        let direct = (s[0] * s[0] - s[1] * s[1] - s[2] * s[2] - s[3] * s[3]).sqrt();
        assert!((n_g - direct).abs() < 1e-13, "{n_g} vs {direct}");
        for d in 0..3 {
            assert!((flux[d] - s[1 + d]).abs() < 1e-15);
        }
        assert!((alpha_g - s[4]).abs() < 1e-13);
    }

    #[test]
    fn oversized_perturbations_are_flagged() {
        let eq = eq0();
        // g = J0 - 3 J0 has a past-pointing current: negative density.
        let h: Vec<f64> = eq.j0.iter().map(|&j| -3.0 * j).collect();
        assert!(matches!(macro_of_perturbed(&eq, &h), Err(Error::NonPhysical(_))));
        // A large odd component drives |flux| past the density and off
        // the timelike cone.
        let grid = eq.grid();
        let tilted: Vec<f64> = eq
            .j0
            .iter()
            .enumerate()
            .map(|(idx, &j)| {
                let q = grid.node(idx);
                let q0 = (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
                8.0 * q[0] / q0 * j
            })
            .collect();
        assert!(matches!(macro_of_perturbed(&eq, &tilted), Err(Error::NonTimelike(_))));
    }

    #[test]
    fn projector_fixes_the_invariant_basis() {
        let eq = eq0();
        for (k, b) in eq.invariant_basis().iter().enumerate() {
            let pb = apply_projector(&eq, b);
            let err = b
                .iter()
                .zip(&pb)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max);
            let scale = b.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            assert!(err <= 1e-13 * scale, "basis {k}: err {err:.3e}");
        }
    }

    #[test]
    fn projector_is_idempotent_on_random_input() {
        let eq = eq0();
        let f = random_vec(&eq, 5);
        let pf = apply_projector(&eq, &f);
        let ppf = apply_projector(&eq, &pf);
        let err = pf.iter().zip(&ppf).map(|(x, y)| (x - y).abs()).fold(0.0f64, f64::max);
        assert!(err < 1e-14, "idempotence err {err:.3e}");
    }

    #[test]
    fn projection_residual_is_weighted_orthogonal_to_the_basis() {
        let eq = eq0();
        let f = random_vec(&eq, 11);
        let pf = apply_projector(&eq, &f);
        let resid: Vec<f64> = f.iter().zip(&pf).map(|(a, b)| a - b).collect();
        for b in eq.invariant_basis().iter() {
            let ip = eq.ip_weighted(&resid, b);
            assert!(ip.abs() < 1e-13, "residual not orthogonal: {ip:.3e}");
        }
    }

    #[test]
    fn annihilates_weighted_orthogonal_complement() {
        // Subtracting the projection leaves a vector P must send to zero.
        let eq = eq0();
        let f = random_vec(&eq, 21);
        let pf = apply_projector(&eq, &f);
        let resid: Vec<f64> = f.iter().zip(&pf).map(|(a, b)| a - b).collect();
        let p_resid = apply_projector(&eq, &resid);
        let err = p_resid.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        assert!(err < 1e-14, "P on complement: {err:.3e}");
    }
}
