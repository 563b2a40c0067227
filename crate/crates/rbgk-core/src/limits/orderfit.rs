//! Convergence-order estimation from (epsilon, metric) ladders.

use crate::error::{Error, Result};

/// Least-squares slope of ln(metric) against ln(epsilon).
///
/// For metric = C * epsilon^p the returned value is p. Points with a
/// nonpositive metric are rejected (they carry no order information and
/// usually mean the metric hit roundoff).
pub fn fitted_order(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::domain(format!(
            "order fit needs at least 2 ladder points, got {}",
            points.len()
        )));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(eps, metric) in points {
        if !(eps > 0.0) || !(metric > 0.0) || !metric.is_finite() {
            return Err(Error::domain(format!(
                "order fit needs positive finite (epsilon, metric), got ({eps}, {metric})"
            )));
        }
        xs.push(eps.ln());
        ys.push(metric.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::domain("order fit needs distinct epsilon values"));
    }
    Ok(sxy / sxx)
}

/// True when the metric strictly decreases along the ladder sorted by
/// decreasing epsilon.
pub fn strictly_decreasing(points: &[(f64, f64)]) -> bool {
    let mut sorted: Vec<(f64, f64)> = points.to_vec();
    sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    sorted.windows(2).all(|w| w[1].1 < w[0].1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_is_recovered() {
        let pts: Vec<(f64, f64)> =
            [0.3, 0.2, 0.1, 0.05].iter().map(|&e| (e, 2.5 * e * e)).collect();
        let p = fitted_order(&pts).unwrap();
        assert!((p - 2.0).abs() < 1e-12, "order {p}");
    }

    #[test]
    fn noisy_power_law_is_recovered_approximately() {
        let pts: Vec<(f64, f64)> = [0.3f64, 0.2, 0.15, 0.1, 0.05]
            .iter()
            .enumerate()
            .map(|(k, &e)| (e, e.powf(1.5) * (1.0 + 0.05 * if k % 2 == 0 { 1.0 } else { -1.0 })))
            .collect();
        let p = fitted_order(&pts).unwrap();
        assert!((p - 1.5).abs() < 0.1, "order {p}");
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(fitted_order(&[(0.1, 1.0)]).is_err());
        assert!(fitted_order(&[(0.1, 1.0), (0.1, 2.0)]).is_err());
        assert!(fitted_order(&[(0.1, 0.0), (0.2, 1.0)]).is_err());
    }

    #[test]
    fn monotonicity_check_sorts_by_epsilon() {
        assert!(strictly_decreasing(&[(0.01, 1.0), (0.1, 3.0), (0.03, 2.0)]));
        assert!(!strictly_decreasing(&[(0.1, 3.0), (0.03, 3.0), (0.01, 1.0)]));
    }
}
