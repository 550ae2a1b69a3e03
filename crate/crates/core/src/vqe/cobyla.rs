//! Powell's COBYLA restricted to unconstrained problems.
//!
//! The optimizer keeps `n + 1` interpolation points (a base vertex plus `n`
//! displacements), fits the linear model through them, and steps to the
//! minimiser of that model on a ball of radius `rho`. Successful steps keep
//! `rho`; failed ones first repair the simplex geometry and then halve `rho`
//! until it reaches `rho_end`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

// Powell's constants: acceptability bounds on simplex shape (alpha, beta),
// geometry-step length (gamma) and the edge threshold for vertex replacement
// (delta).
const ALPHA: f64 = 0.25;
const BETA: f64 = 2.1;
const GAMMA: f64 = 0.5;
const DELTA: f64 = 1.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub rho_begin: f64,
    pub rho_end: f64,
    pub max_evaluations: usize,
    /// Seeds the initial parameters of a VQE run; unused by the optimizer.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            rho_begin: 0.5,
            rho_end: 1e-6,
            max_evaluations: 5000,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self, dimension: usize) -> Result<()> {
        if !(self.rho_end > 0.0 && self.rho_end < self.rho_begin && self.rho_begin.is_finite()) {
            return Err(Error::domain(format!(
                "need 0 < rho_end < rho_begin, got {} and {}",
                self.rho_end, self.rho_begin
            )));
        }
        if self.max_evaluations < dimension + 2 {
            return Err(Error::domain(format!(
                "max_evaluations {} below dimension + 2 = {}",
                self.max_evaluations,
                dimension + 2
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    /// Best point seen.
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    /// `rho` reached `rho_end`, or the model went flat.
    pub converged: bool,
    /// `(evaluation index, value)` for every evaluation, 0-based.
    pub history: Vec<(usize, f64)>,
}

struct Counter<F> {
    objective: F,
    budget: usize,
    history: Vec<(usize, f64)>,
    best: (Vec<f64>, f64),
}

impl<F: FnMut(&[f64]) -> f64> Counter<F> {
    fn exhausted(&self) -> bool {
        self.history.len() >= self.budget
    }

    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        let value = (self.objective)(x);
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective {
                point: x.to_vec(),
                value,
            });
        }
        self.history.push((self.history.len(), value));
        if value < self.best.1 {
            self.best = (x.to_vec(), value);
        }
        Ok(value)
    }
}

/// Simplex stored as base vertex plus displacement rows.
struct Simplex {
    base: Vec<f64>,
    f_base: f64,
    /// `disp[j]` is vertex `j` minus the base.
    disp: Vec<Vec<f64>>,
    f: Vec<f64>,
}

impl Simplex {
    fn n(&self) -> usize {
        self.base.len()
    }

    fn point(&self, d: &[f64]) -> Vec<f64> {
        self.base.iter().zip(d).map(|(b, d)| b + d).collect()
    }

    /// Moves the base to the best vertex, re-expressing displacements.
    fn pivot_to_best(&mut self) {
        let Some(j) = (0..self.n())
            .filter(|&j| self.f[j] < self.f_base)
            .min_by(|&a, &b| self.f[a].total_cmp(&self.f[b]))
        else {
            return;
        };
        let shift = self.disp[j].clone();
        for (b, s) in self.base.iter_mut().zip(&shift) {
            *b += s;
        }
        for (k, d) in self.disp.iter_mut().enumerate() {
            if k == j {
                d.iter_mut().for_each(|x| *x = -*x);
            } else {
                d.iter_mut().zip(&shift).for_each(|(x, s)| *x -= s);
            }
        }
        std::mem::swap(&mut self.f_base, &mut self.f[j]);
    }

    /// Rows `s_j` of the inverse displacement matrix: `s_j · disp[k] = δ_jk`.
    fn inverse_rows(&self) -> Option<Vec<Vec<f64>>> {
        let n = self.n();
        // Gauss-Jordan on the matrix whose rows are the displacements.
        let mut a: Vec<Vec<f64>> = self.disp.clone();
        let mut inv: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
            .collect();
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
            if a[pivot][col].abs() < 1e-300 {
                return None;
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col];
            a[col].iter_mut().for_each(|x| *x /= p);
            inv[col].iter_mut().for_each(|x| *x /= p);
            for row in 0..n {
                if row != col && a[row][col] != 0.0 {
                    let factor = a[row][col];
                    for k in 0..n {
                        a[row][k] -= factor * a[col][k];
                        inv[row][k] -= factor * inv[col][k];
                    }
                }
            }
        }
        // disp[j] · column_k(inv) = δ_jk, so s_k is column k of inv.
        Some((0..n).map(|k| (0..n).map(|i| inv[i][k]).collect()).collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Shape {
    acceptable: bool,
    /// Distance of each vertex from the opposite face.
    sigma: Vec<f64>,
    /// Edge length from the base to each vertex.
    eta: Vec<f64>,
}

fn shape(simplex: &Simplex, inv: &[Vec<f64>], rho: f64) -> Shape {
    let sigma: Vec<f64> = inv.iter().map(|s| 1.0 / norm(s)).collect();
    let eta: Vec<f64> = simplex.disp.iter().map(|d| norm(d)).collect();
    let acceptable = sigma.iter().all(|&s| s >= ALPHA * rho) && eta.iter().all(|&e| e <= BETA * rho);
    Shape { acceptable, sigma, eta }
}

/// Minimises `objective` from `x0` without derivatives.
///
/// Returns the best point evaluated, which is never worse than `x0`. Stops
/// when `rho` has been reduced to `rho_end`, when every simplex vertex has the
/// same value (no descent information), or when the evaluation budget runs
/// out; only the last case reports `converged = false`.
pub fn cobyla_minimize<F>(objective: F, x0: &[f64], cfg: &OptimizerConfig) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    if n == 0 {
        return Err(Error::domain("cannot optimise over zero parameters"));
    }
    if x0.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("starting point is not finite"));
    }
    cfg.validate(n)?;

    let mut counter = Counter {
        objective,
        budget: cfg.max_evaluations,
        history: Vec::new(),
        best: (x0.to_vec(), f64::INFINITY),
    };
    let mut rho = cfg.rho_begin;

    let f0 = counter.eval(x0)?;
    let mut simplex = Simplex {
        base: x0.to_vec(),
        f_base: f0,
        disp: Vec::with_capacity(n),
        f: Vec::with_capacity(n),
    };
    for j in 0..n {
        let mut d = vec![0.0; n];
        d[j] = rho;
        let value = counter.eval(&simplex.point(&d))?;
        simplex.disp.push(d);
        simplex.f.push(value);
    }

    let mut converged = false;
    let mut repair_geometry = false;
    while !counter.exhausted() {
        simplex.pivot_to_best();
        let Some(inv) = simplex.inverse_rows() else {
            // Degenerate simplex: rebuild it around the base at the current radius.
            for j in 0..n {
                if counter.exhausted() {
                    break;
                }
                let mut d = vec![0.0; n];
                d[j] = rho;
                simplex.f[j] = counter.eval(&simplex.point(&d))?;
                simplex.disp[j] = d;
            }
            continue;
        };
        let grad: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| (simplex.f[j] - simplex.f_base) * inv[j][i]).sum())
            .collect();
        let geom = shape(&simplex, &inv, rho);

        if repair_geometry && !geom.acceptable {
            // Replace the vertex that most spoils the shape with one at
            // distance gamma·rho along its face normal, on the side where the
            // linear model decreases.
            let (far, far_eta) = geom
                .eta
                .iter()
                .copied()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("n >= 1");
            let j = if far_eta > BETA * rho {
                far
            } else {
                (0..n)
                    .min_by(|&a, &b| geom.sigma[a].total_cmp(&geom.sigma[b]))
                    .expect("n >= 1")
            };
            let scale = GAMMA * rho * geom.sigma[j];
            let mut d: Vec<f64> = inv[j].iter().map(|s| s * scale).collect();
            if dot(&grad, &d) > 0.0 {
                d.iter_mut().for_each(|x| *x = -*x);
            }
            simplex.f[j] = counter.eval(&simplex.point(&d))?;
            simplex.disp[j] = d;
            continue;
        }
        repair_geometry = false;

        let g_norm = norm(&grad);
        if g_norm == 0.0 && simplex.f.iter().all(|&f| f == simplex.f_base) {
            converged = true;
            break;
        }

        let mut step_ok = false;
        if g_norm > 0.0 {
            let d: Vec<f64> = grad.iter().map(|g| -rho * g / g_norm).collect();
            let predicted = rho * g_norm;
            let f_new = counter.eval(&simplex.point(&d))?;
            let actual = simplex.f_base - f_new;

            // Choose the vertex the trial point replaces: prefer the one that
            // keeps the simplex volume largest, but drop a far-away vertex
            // when that does not ruin the shape.
            let threshold = if actual > 0.0 { 0.0 } else { 1.0 };
            let mut drop = None;
            let mut best_vol = threshold;
            let mut sigbar = vec![0.0; n];
            for j in 0..n {
                let v = dot(&inv[j], &d).abs();
                if v > best_vol {
                    best_vol = v;
                    drop = Some(j);
                }
                sigbar[j] = v * geom.sigma[j];
            }
            let mut edge_max = DELTA * rho;
            let mut far = None;
            for j in 0..n {
                if sigbar[j] >= ALPHA * rho || sigbar[j] >= geom.sigma[j] {
                    let dist = if actual > 0.0 {
                        simplex.disp[j]
                            .iter()
                            .zip(&d)
                            .map(|(a, b)| (a - b).powi(2))
                            .sum::<f64>()
                            .sqrt()
                    } else {
                        geom.eta[j]
                    };
                    if dist > edge_max {
                        edge_max = dist;
                        far = Some(j);
                    }
                }
            }
            if let Some(j) = far.or(drop) {
                simplex.disp[j] = d;
                simplex.f[j] = f_new;
            }
            step_ok = actual > 0.0 && actual >= 0.1 * predicted;
        }
        if step_ok {
            continue;
        }

        simplex.pivot_to_best();
        let acceptable = simplex
            .inverse_rows()
            .is_some_and(|inv| shape(&simplex, &inv, rho).acceptable);
        if !acceptable {
            repair_geometry = true;
            continue;
        }
        if rho > cfg.rho_end {
            rho *= 0.5;
            if rho <= 1.5 * cfg.rho_end {
                rho = cfg.rho_end;
            }
            continue;
        }
        converged = true;
        break;
    }

    let (x, f) = counter.best;
    Ok(Minimum {
        x,
        f,
        evaluations: counter.history.len(),
        converged,
        history: counter.history,
    })
}
