//! One-dimensional Gauss-Legendre quadrature.
//!
//! Provides fixed rules with node tables computed at first use (Newton on
//! the Legendre roots, good to machine precision) and an adaptive
//! interval-halving driver. The adaptive driver is deliberately simple and
//! serves as the reference integrator that the fast fixed-panel paths are
//! validated against.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration from the Chebyshev root guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "rule order must be at least 2");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for k in 0..n {
            // Guess for the k-th root of P_n, counted from the right.
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence for P_n(x) and P_{n-1}(x).
                let mut p0 = 1.0;
                let mut p1 = x;
                for j in 2..=n {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nf * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[k] = x;
            weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    }

    /// Integral of f over [a, b] with this rule.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Shared 15-point rule (adaptive driver panels).
pub fn gl15() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(15))
}

/// Shared 40-point rule (fixed fast-path panels).
pub fn gl40() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(40))
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the per-panel halving discrepancies; a conservative bound.
    pub error_estimate: f64,
    pub panels: usize,
}

const MAX_DEPTH: usize = 52;

/// Adaptive Gauss-Legendre integration of f over [a, b].
///
/// Each panel is accepted when the 15-point estimate over the panel agrees
/// with the sum over its halves to within the panel's share of the global
/// tolerance `max(abs_tol, rel_tol * |I|)`, where I is a first whole-range
/// estimate refined as the recursion proceeds.
pub fn adaptive(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::domain(format!("bad interval [{a}, {b}]")));
    }
    let rule = gl15();
    let rough = rule.integrate(a, b, &mut *f);
    let tol = abs_tol.max(rel_tol * rough.abs()).max(f64::MIN_POSITIVE);
    // Per-panel tolerances are halved on every split; once they drop to the
    // roundoff scale of the whole-range value, further refinement only
    // chases floating-point noise.
    let floor = f64::EPSILON * rough.abs();
    let mut out = QuadResult { value: 0.0, error_estimate: 0.0, panels: 0 };
    split(f, rule, a, b, rough, tol, floor, 0, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn split(
    f: &mut impl FnMut(f64) -> f64,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    floor: f64,
    depth: usize,
    out: &mut QuadResult,
) -> Result<()> {
    let m = 0.5 * (a + b);
    let left = rule.integrate(a, m, &mut *f);
    let right = rule.integrate(m, b, &mut *f);
    let refined = left + right;
    let disc = (refined - whole).abs();
    if disc <= tol.max(floor) || depth >= MAX_DEPTH {
        if depth >= MAX_DEPTH && disc > tol.max(floor) {
            return Err(Error::Convergence(format!(
                "adaptive quadrature stalled on [{a}, {b}] (discrepancy {disc:.3e} > {tol:.3e})"
            )));
        }
        out.value += refined;
        out.error_estimate += disc;
        out.panels += 2;
        return Ok(());
    }
    split(f, rule, a, m, left, 0.5 * tol, floor, depth + 1, out)?;
    split(f, rule, m, b, right, 0.5 * tol, floor, depth + 1, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_rule_is_exact_on_polynomials() {
        let rule = GaussLegendre::new(8);
        // degree 15 polynomial: exactly integrated by an 8-point rule
        let val = rule.integrate(-1.0, 1.0, |x| x.powi(14) + 3.0 * x.powi(7));
        assert!((val - 2.0 / 15.0).abs() < 1e-14, "got {val}");
    }

    #[test]
    fn gl_nodes_are_symmetric() {
        let rule = GaussLegendre::new(15);
        for k in 0..15 {
            assert!((rule.nodes[k] + rule.nodes[14 - k]).abs() < 1e-15);
            assert!((rule.weights[k] - rule.weights[14 - k]).abs() < 1e-15);
        }
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // integral of exp(-x^2/2)/sqrt(2 pi) over [-40, 40] = 1
        let norm = (2.0 * std::f64::consts::PI).sqrt();
        let mut f = |x: f64| (-0.5 * x * x).exp() / norm;
        let r = adaptive(&mut f, -40.0, 40.0, 1e-13, 0.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "got {}", r.value);
    }

    #[test]
    fn adaptive_rejects_bad_interval() {
        assert!(adaptive(&mut |x: f64| x, 1.0, 0.0, 1e-10, 0.0).is_err());
    }
}
