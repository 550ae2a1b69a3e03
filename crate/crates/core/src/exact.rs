//! Exact ground-truth oracle on the fixed-particle-number sector.

use rayon::prelude::*;

use crate::model::{build_sector_hamiltonian, RingConfig, SectorHamiltonian};
use crate::{Error, Result};

/// Off-diagonal Frobenius tolerance, relative to `max(1, ||A||_F)`.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Unit-norm amplitudes in sector basis order; the largest-magnitude
    /// component is positive.
    pub amplitudes: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalMinimum {
    pub bitmask: u64,
    pub energy: f64,
}

/// All `C(sites, particles)` occupation masks, increasing.
pub fn enumerate_basis(sites: usize, particles: usize) -> Result<Vec<u64>> {
    if sites > 20 {
        return Err(Error::domain(format!(
            "basis enumeration limited to 20 sites, got {sites}"
        )));
    }
    if particles == 0 || particles >= sites {
        return Err(Error::domain(format!(
            "need 0 < particles < sites, got {particles} on {sites}"
        )));
    }
    // Gosper's hack walks same-popcount integers in increasing order.
    let limit = 1u64 << sites;
    let mut mask = (1u64 << particles) - 1;
    let mut out = Vec::new();
    while mask < limit {
        out.push(mask);
        let low = mask & mask.wrapping_neg();
        let ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
    Ok(out)
}

/// Full eigendecomposition of a real symmetric matrix by cyclic Jacobi
/// rotations. Returns `(eigenvalues, eigenvectors)` with eigenvector `k` in
/// column `k` of the row-major output.
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if matrix.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            actual: matrix.len(),
        });
    }
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for k in 0..n {
        v[k * n + k] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= JACOBI_TOLERANCE * scale {
            let values = (0..n).map(|k| a[k * n + k]).collect();
            return Ok((values, v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::Convergence {
        sweeps: JACOBI_MAX_SWEEPS,
        off_norm: off_norm(&a),
    })
}

pub fn ground_state(h: &SectorHamiltonian) -> Result<GroundState> {
    let n = h.dimension();
    let (values, vectors) = jacobi_eigen(h.matrix(), n)?;
    let lowest = values
        .iter()
        .enumerate()
        .fold(0, |best, (k, &e)| if e < values[best] { k } else { best });
    let mut amplitudes: Vec<f64> = (0..n).map(|r| vectors[r * n + lowest]).collect();
    let norm = amplitudes.iter().map(|x| x * x).sum::<f64>().sqrt();
    let pivot = amplitudes.iter().enumerate().fold(
        0,
        |best, (k, x)| if x.abs() > amplitudes[best].abs() { k } else { best },
    );
    let sign = if amplitudes[pivot] < 0.0 { -1.0 } else { 1.0 };
    amplitudes.iter_mut().for_each(|x| *x *= sign / norm);

    // Rayleigh quotient of the normalised vector is at least as accurate as
    // the rotated diagonal.
    let mut energy = 0.0;
    for r in 0..n {
        let row: f64 = (0..n).map(|c| h.get(r, c) * amplitudes[c]).sum();
        energy += amplitudes[r] * row;
    }
    Ok(GroundState { energy, amplitudes })
}

/// Basis state with the lowest diagonal entry; ties go to the smaller mask.
pub fn diagonal_minimum(h: &SectorHamiltonian) -> ClassicalMinimum {
    h.basis()
        .iter()
        .zip(h.diagonal())
        .fold(None, |best: Option<ClassicalMinimum>, (&bitmask, energy)| match best {
            Some(b) if b.energy <= energy => Some(b),
            _ => Some(ClassicalMinimum { bitmask, energy }),
        })
        .expect("sector is never empty")
}

/// Exact ground energy for each interaction strength, in input order.
pub fn energy_sweep(template: &RingConfig, interactions: &[f64]) -> Result<Vec<(f64, f64)>> {
    if interactions.is_empty() {
        return Err(Error::domain("empty interaction list"));
    }
    if let Some(u) = interactions.iter().find(|u| !(u.is_finite() && **u >= 0.0)) {
        return Err(Error::domain(format!("interaction must be non-negative, got {u}")));
    }
    interactions
        .par_iter()
        .map(|&u| {
            let h = build_sector_hamiltonian(&template.with_interaction(u))?;
            Ok((u, ground_state(&h)?.energy))
        })
        .collect()
}
