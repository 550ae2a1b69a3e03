use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtrapolationFit {
    /// Least-squares straight line.
    Linear,
    /// Interpolating polynomial of degree `points - 1`.
    #[default]
    Richardson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    /// Fitted value at zero noise.
    pub value: f64,
    /// Polynomial coefficients in increasing powers of the scale factor.
    pub coefficients: Vec<f64>,
}

/// Extrapolates `(scale, energy)` points to scale zero.
pub fn zne_extrapolate(points: &[(f64, f64)], fit: ExtrapolationFit) -> Result<Extrapolation> {
    if points.len() < 2 {
        return Err(Error::domain(format!("need at least two points, got {}", points.len())));
    }
    for (k, &(x, _)) in points.iter().enumerate() {
        if points[..k].iter().any(|&(y, _)| y == x) {
            return Err(Error::domain(format!("duplicate scale factor {x}")));
        }
    }
    match fit {
        ExtrapolationFit::Linear => {
            let n = points.len() as f64;
            let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
            let my = points.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = points.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
            let slope = sxy / sxx;
            let intercept = my - slope * mx;
            Ok(Extrapolation {
                value: intercept,
                coefficients: vec![intercept, slope],
            })
        }
        ExtrapolationFit::Richardson => {
            // Lagrange form at zero: sum_i y_i prod_{j != i} x_j / (x_j - x_i)
            let value = points
                .iter()
                .enumerate()
                .map(|(i, &(xi, yi))| {
                    let weight: f64 = points
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &(xj, _))| xj / (xj - xi))
                        .product();
                    yi * weight
                })
                .sum();
            Ok(Extrapolation {
                value,
                coefficients: interpolating_polynomial(points),
            })
        }
    }
}

/// Monomial coefficients through Newton divided differences.
fn interpolating_polynomial(points: &[(f64, f64)]) -> Vec<f64> {
    let n = points.len();
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let mut dd: Vec<f64> = points.iter().map(|p| p.1).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // Horner expansion of the Newton form from the innermost term out.
    let mut coeffs = vec![0.0; n];
    coeffs[0] = dd[n - 1];
    for k in (0..n - 1).rev() {
        // coeffs <- coeffs * (x - xs[k]) + dd[k]
        for d in (1..n).rev() {
            coeffs[d] = coeffs[d - 1] - xs[k] * coeffs[d];
        }
        coeffs[0] = dd[k] - xs[k] * coeffs[0];
    }
    coeffs
}
