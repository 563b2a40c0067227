//! Modified Bessel functions of the second kind K_0, K_1, K_2 for real
//! positive argument, plus the ratio K_1/K_2, its derivative, its inverse,
//! and the scalar kernels built from them.
//!
//! Everything is computed from the integral representation
//!
//! ```text
//! K_j(beta) = integral_0^inf cosh(j r) exp(-beta cosh r) dr .
//! ```
//!
//! The substitution x = sinh(r/2) turns this into a Gaussian-type integral
//!
//! ```text
//! e^beta K_j(beta) = 2 integral_0^inf c_j(x) exp(-2 beta x^2) / sqrt(1 + x^2) dx
//! c_0 = 1,   c_1 = 1 + 2 x^2,   c_2 = 2 (1 + 2 x^2)^2 - 1 ,
//! ```
//!
//! which is analytic on the integration ray (nearest singularity at
//! x = +-i), decays like exp(-2 beta x^2), and carries no overall
//! exp(-beta) factor, so the scaled values `e^beta K_j` stay representable
//! for every beta > 0. The unscaled values underflow near beta ~ 705 and
//! are refused beyond [`MAX_BETA`].
//!
//! Fast path: composite 40-point Gauss-Legendre on a fixed panel set whose
//! boundaries resolve both the decay scale sigma = 1/sqrt(2 beta) and the
//! unit distance to the singularity. Reference path: adaptive quadrature
//! from [`crate::quad`], used by the oracle tests and available through
//! [`reference`].

use crate::error::{Error, Result};
use crate::quad;

/// Largest argument for which the unscaled K_j are representable in f64.
pub const MAX_BETA: f64 = 700.0;

fn check_order(order: u8) -> Result<()> {
    if order > 2 {
        return Err(Error::domain(format!("Bessel order {order} not supported (0, 1, 2)")));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("Bessel argument must be positive, got {beta}")));
    }
    Ok(())
}

/// Even polynomial factor c_j(x) of the transformed integrand.
#[inline]
fn poly_factor(order: u8, x2: f64) -> f64 {
    match order {
        0 => 1.0,
        1 => 1.0 + 2.0 * x2,
        _ => {
            let t = 1.0 + 2.0 * x2;
            2.0 * t * t - 1.0
        }
    }
}

#[inline]
fn scaled_integrand(order: u8, beta: f64, x: f64) -> f64 {
    let x2 = x * x;
    poly_factor(order, x2) * (-2.0 * beta * x2).exp() / (1.0 + x2).sqrt()
}

/// Upper cutoff: exp(-2 beta L^2) = e^-42, beyond double-precision relevance
/// even with the x^4 growth of c_2.
fn cutoff(beta: f64) -> f64 {
    (21.0 / beta).sqrt()
}

/// Panel boundaries merging a dyadic ladder (resolves the x = +-i
/// singularity scale) with a ladder on the Gaussian width sigma.
fn panel_bounds(beta: f64) -> Vec<f64> {
    let limit = cutoff(beta);
    let sigma = 1.0 / (2.0 * beta).sqrt();
    let mut bounds: Vec<f64> = vec![0.0];
    let mut ladder = Vec::new();
    let mut s = 4.0 * sigma;
    while s < limit {
        ladder.push(s);
        s *= 2.0;
    }
    let mut d = 1.0;
    while d < limit {
        ladder.push(d);
        d *= 2.0;
    }
    ladder.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for v in ladder {
        let prev = *bounds.last().unwrap();
        // Skip slivers: a panel thinner than 30% of its left edge buys nothing.
        if v > 1.3 * prev.max(0.25 * v) {
            bounds.push(v);
        }
    }
    let prev = *bounds.last().unwrap();
    if limit > 1.3 * prev {
        bounds.push(limit);
    } else {
        *bounds.last_mut().unwrap() = limit;
    }
    bounds
}

/// Scaled value `e^beta K_order(beta)` by the fixed fast path.
pub fn bessel_k_scaled(order: u8, beta: f64) -> Result<f64> {
    check_order(order)?;
    check_beta(beta)?;
    let rule = quad::gl40();
    let bounds = panel_bounds(beta);
    let mut acc = 0.0;
    for pair in bounds.windows(2) {
        acc += rule.integrate(pair[0], pair[1], |x| scaled_integrand(order, beta, x));
    }
    Ok(2.0 * acc)
}

/// Unscaled `K_order(beta)`. Fails with an underflow error past [`MAX_BETA`].
pub fn bessel_k(order: u8, beta: f64) -> Result<f64> {
    check_order(order)?;
    check_beta(beta)?;
    if beta > MAX_BETA {
        return Err(Error::Underflow(format!(
            "K_{order}({beta}) underflows f64; use the scaled form for beta > {MAX_BETA}"
        )));
    }
    Ok(bessel_k_scaled(order, beta)? * (-beta).exp())
}

/// Reference evaluations by adaptive quadrature (slow, independently
/// error-controlled). The fast path is validated against these.
pub mod reference {
    use super::*;

    /// Scaled `e^beta K_order(beta)` to the requested relative tolerance.
    pub fn bessel_k_scaled(order: u8, beta: f64, rel_tol: f64) -> Result<f64> {
        check_order(order)?;
        check_beta(beta)?;
        let limit = cutoff(beta).max(1.0);
        let mut f = |x: f64| scaled_integrand(order, beta, x);
        let r = quad::adaptive(&mut f, 0.0, limit, rel_tol, 0.0)?;
        Ok(2.0 * r.value)
    }
}

/// The ratio R(beta) = K_1(beta) / K_2(beta).
///
/// Strictly increasing from 0 to 1 on (0, inf); computed from the scaled
/// values so it is valid for every beta > 0.
pub fn ratio_k1k2(beta: f64) -> Result<f64> {
    let k1 = bessel_k_scaled(1, beta)?;
    let k2 = bessel_k_scaled(2, beta)?;
    Ok(k1 / k2)
}

/// Derivative R'(beta) through the closed form R' = 3 R / beta + R^2 - 1,
/// a consequence of the K_j recurrences.
pub fn ratio_derivative(beta: f64) -> Result<f64> {
    let r = ratio_k1k2(beta)?;
    Ok(3.0 * r / beta + r * r - 1.0)
}

/// Residual tolerance for the inverse ratio: |R(beta) - alpha| below this
/// terminates the iteration.
pub const INVERSE_RATIO_TOL: f64 = 1e-12;

/// Inverse of the ratio: the unique beta > 0 with K_1(beta)/K_2(beta) = alpha.
///
/// alpha must lie strictly inside (0, 1). Asymptotic initial guesses
/// (beta ~ 2 alpha for small alpha, beta ~ 3 / (2 (1 - alpha)) near 1) are
/// expanded to a bracket, then polished by Newton steps safeguarded by
/// bisection, using the closed-form derivative.
pub fn inverse_ratio(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "ratio inverse defined only on (0, 1), got {alpha}"
        )));
    }
    let guess = if alpha < 0.45 { 2.0 * alpha } else { 1.5 / (1.0 - alpha) };

    // Geometric bracket expansion around the guess; R is strictly increasing.
    let mut lo = guess;
    let mut hi = guess;
    let mut r_lo = ratio_k1k2(lo)?;
    let mut r_hi = r_lo;
    let mut tries = 0;
    while r_lo > alpha {
        lo *= 0.5;
        r_lo = ratio_k1k2(lo)?;
        tries += 1;
        if tries > 2100 {
            return Err(Error::Bracket(format!("no lower bracket for alpha = {alpha}")));
        }
    }
    tries = 0;
    while r_hi < alpha {
        hi *= 2.0;
        r_hi = ratio_k1k2(hi)?;
        tries += 1;
        if tries > 2100 {
            return Err(Error::Bracket(format!("no upper bracket for alpha = {alpha}")));
        }
    }

    let mut beta = guess.clamp(lo, hi);
    for _ in 0..200 {
        let r = ratio_k1k2(beta)?;
        let resid = r - alpha;
        if resid.abs() <= INVERSE_RATIO_TOL {
            return Ok(beta);
        }
        if resid > 0.0 {
            hi = beta;
        } else {
            lo = beta;
        }
        let dr = 3.0 * r / beta + r * r - 1.0;
        let newton = beta - resid / dr;
        beta = if dr > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Convergence(format!(
        "ratio inversion did not reach {INVERSE_RATIO_TOL:e} for alpha = {alpha}"
    )))
}

/// All three K values at one argument, plus the ratio.
#[derive(Debug, Clone, Copy)]
pub struct BesselEval {
    pub beta: f64,
    /// Scaled values e^beta K_j(beta).
    pub k0_scaled: f64,
    pub k1_scaled: f64,
    pub k2_scaled: f64,
    /// R = K_1 / K_2.
    pub ratio: f64,
}

impl BesselEval {
    pub fn new(beta: f64) -> Result<Self> {
        let k0_scaled = bessel_k_scaled(0, beta)?;
        let k1_scaled = bessel_k_scaled(1, beta)?;
        let k2_scaled = bessel_k_scaled(2, beta)?;
        Ok(BesselEval { beta, k0_scaled, k1_scaled, k2_scaled, ratio: k1_scaled / k2_scaled })
    }

    /// Unscaled K_j; underflow error past [`MAX_BETA`].
    pub fn unscaled(&self) -> Result<(f64, f64, f64)> {
        if self.beta > MAX_BETA {
            return Err(Error::Underflow(format!(
                "K_j({}) underflows f64; use the scaled accessors",
                self.beta
            )));
        }
        let damp = (-self.beta).exp();
        Ok((self.k0_scaled * damp, self.k1_scaled * damp, self.k2_scaled * damp))
    }
}

/// Natural log of the normalization M(beta) = 4 pi K_2(beta) / beta,
/// computed from the scaled K_2 so it never under- or overflows.
pub fn ln_normalization(beta: f64) -> Result<f64> {
    let k2_scaled = bessel_k_scaled(2, beta)?;
    Ok((4.0 * std::f64::consts::PI * k2_scaled / beta).ln() - beta)
}

/// M(beta) itself; underflow error past [`MAX_BETA`].
pub fn normalization(beta: f64) -> Result<f64> {
    if beta > MAX_BETA {
        return Err(Error::Underflow(format!(
            "M({beta}) underflows f64; use ln_normalization"
        )));
    }
    Ok(4.0 * std::f64::consts::PI * bessel_k(2, beta)? / beta)
}

/// Scalar kernels of one beta that the macroscopic relations use.
#[derive(Debug, Clone, Copy)]
pub struct ScalarKernels {
    pub beta: f64,
    /// R = K_1 / K_2.
    pub ratio: f64,
    /// ln M(beta), M = 4 pi K_2 / beta.
    pub ln_norm: f64,
    /// Psi = 3 / beta + R: energy per particle of the equilibrium.
    pub psi: f64,
    /// chi = 1 / beta + Psi: enthalpy per particle.
    pub chi: f64,
}

impl ScalarKernels {
    pub fn new(beta: f64) -> Result<Self> {
        let ev = BesselEval::new(beta)?;
        let ratio = ev.ratio;
        let ln_norm = (4.0 * std::f64::consts::PI * ev.k2_scaled / beta).ln() - beta;
        let psi = 3.0 / beta + ratio;
        Ok(ScalarKernels { beta, ratio, ln_norm, psi, chi: 1.0 / beta + psi })
    }
}
