//! The interaction sweep: exact oracle, raw VQE and mitigated estimate at
//! evenly spaced couplings.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wigner_core::circuit::NoiseModel;
use wigner_core::exact::{diagonal_minimum, ground_state};
use wigner_core::mitigation::{MitigatedEstimate, MitigationConfig};
use wigner_core::model::{analyze_threshold, build_sector_hamiltonian, RingConfig};
use wigner_core::vqe::{
    initial_parameters, relative_error, run_vqe_from, AnsatzKind, AnsatzSpec, EnergyObjective, OptimizerConfig,
};

use crate::{CliError, Result};

/// Environment variable holding the default worker count for cold-started
/// sweeps.
pub const WORKERS_ENV: &str = "WIGNER_WORKERS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnsatzSettings {
    pub kind: AnsatzKind,
    pub layers: usize,
}

impl Default for AnsatzSettings {
    fn default() -> Self {
        AnsatzSettings {
            kind: AnsatzKind::NumberPreserving,
            layers: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub u_min: f64,
    pub u_max: f64,
    pub points: usize,
    /// Ring template; its own interaction is ignored.
    pub ring: RingConfig,
    pub ansatz: AnsatzSettings,
    pub optimizer: OptimizerConfig,
    pub noise: Option<NoiseModel>,
    pub mitigation: MitigationConfig,
    pub seed: u64,
    /// Start each point from the previous point's optimum. Points then run in
    /// order of increasing coupling on one thread.
    pub warm_start: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            u_min: 5.0,
            u_max: 75.0,
            points: 15,
            ring: RingConfig::default(),
            ansatz: AnsatzSettings::default(),
            optimizer: OptimizerConfig::default(),
            noise: Some(NoiseModel::default()),
            mitigation: MitigationConfig::default(),
            seed: 0,
            warm_start: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |e: wigner_core::Error| CliError::config(e.to_string());
        if !(self.u_min.is_finite() && self.u_max.is_finite() && self.u_min <= self.u_max) {
            return Err(CliError::config(format!(
                "need finite u_min <= u_max, got {} and {}",
                self.u_min, self.u_max
            )));
        }
        if self.points == 0 {
            return Err(CliError::config("a sweep needs at least one point"));
        }
        if self.points == 1 && self.u_min != self.u_max {
            return Err(CliError::config("a one-point sweep needs u_min = u_max"));
        }
        let first = self.ring.with_interaction(self.u_min);
        first.validate().map_err(bad)?;
        let spec = AnsatzSpec::for_ring(&first, self.ansatz.kind, self.ansatz.layers).map_err(bad)?;
        self.optimizer.validate(spec.parameter_count()).map_err(bad)?;
        if let Some(n) = &self.noise {
            n.validate().map_err(bad)?;
        }
        self.mitigation.validate().map_err(bad)
    }

    /// Couplings from `u_min` to `u_max` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.u_min];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| match k {
                0 => self.u_min,
                k if k == self.points - 1 => self.u_max,
                k => self.u_min + (self.u_max - self.u_min) * k as f64 / last,
            })
            .collect()
    }

    /// Whether records carry a mitigated energy.
    pub fn mitigates(&self) -> bool {
        self.noise.is_some() && self.mitigation.is_active()
    }
}

/// Seed of the `index`-th sweep point.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "E_exact")]
    pub e_exact: f64,
    #[serde(rename = "E_raw")]
    pub e_raw: f64,
    #[serde(rename = "E_mitigated")]
    pub e_mitigated: Option<f64>,
    #[serde(rename = "rel_error_raw_pct")]
    pub rel_error_raw: f64,
    #[serde(rename = "rel_error_mitigated_pct")]
    pub rel_error_mitigated: Option<f64>,
}

/// Per-point optimizer and mitigation details.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostics {
    #[serde(rename = "U")]
    pub u: f64,
    pub seed: u64,
    pub evaluations: usize,
    pub converged: bool,
    pub parameters: Vec<f64>,
    pub mitigation: Option<MitigatedEstimate>,
    /// `(evaluation index, objective value)` for every evaluation.
    #[serde(skip)]
    pub history: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    pub diagnostics: Vec<PointDiagnostics>,
}

impl SweepReport {
    pub fn converged(&self) -> bool {
        self.diagnostics.iter().all(|d| d.converged)
    }
}

/// Worker count from [`WORKERS_ENV`], if set.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::config(format!(
                "{WORKERS_ENV}={v:?} is not a positive integer"
            ))),
        },
    }
}

/// [`run_sweep_with`] using the worker count from the environment.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    run_sweep_with(cfg, workers_from_env()?)
}

/// Runs every point of the sweep. Cold-started points run concurrently on
/// `workers` threads (all cores when `None`); results are in grid order
/// either way and do not depend on the worker count.
pub fn run_sweep_with(cfg: &SweepConfig, workers: Option<usize>) -> Result<SweepReport> {
    cfg.validate()?;
    let grid = cfg.grid();
    let points: Vec<(SweepRecord, PointDiagnostics)> = if cfg.warm_start {
        let mut out = Vec::with_capacity(grid.len());
        let mut start: Option<Vec<f64>> = None;
        for (k, &u) in grid.iter().enumerate() {
            let point = run_point(cfg, k, u, start.as_deref())?;
            start = Some(point.1.parameters.clone());
            out.push(point);
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.unwrap_or(0))
            .build()
            .map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| {
            grid.par_iter()
                .enumerate()
                .map(|(k, &u)| run_point(cfg, k, u, None))
                .collect::<Result<Vec<_>>>()
        })?
    };
    let (records, diagnostics) = points.into_iter().unzip();
    Ok(SweepReport { records, diagnostics })
}

fn run_point(
    cfg: &SweepConfig,
    index: usize,
    u: f64,
    start: Option<&[f64]>,
) -> Result<(SweepRecord, PointDiagnostics)> {
    let at = |source| CliError::Point { u, source };
    let ring = cfg.ring.with_interaction(u);
    let e_exact = ground_state(&build_sector_hamiltonian(&ring).map_err(at)?)
        .map_err(at)?
        .energy;
    let spec = AnsatzSpec::for_ring(&ring, cfg.ansatz.kind, cfg.ansatz.layers).map_err(at)?;
    let seed = point_seed(cfg.seed, index);
    let opt = OptimizerConfig {
        seed,
        ..cfg.optimizer.clone()
    };
    let x0 = match start {
        Some(x) => x.to_vec(),
        None => initial_parameters(spec.parameter_count(), seed),
    };
    let noise = cfg.noise.as_ref();
    let vqe = run_vqe_from(&ring, &spec, &opt, noise, None, &x0).map_err(at)?;
    // Mitigation is applied to the circuit the raw optimisation settled on.
    let mitigation = if cfg.mitigates() {
        let objective = EnergyObjective::new(&ring, &spec, noise, None).map_err(at)?;
        Some(objective.mitigated(&vqe.parameters, &cfg.mitigation).map_err(at)?)
    } else {
        None
    };
    let e_mitigated = mitigation.as_ref().map(|m| m.energy);
    let record = SweepRecord {
        u,
        e_exact,
        e_raw: vqe.energy,
        e_mitigated,
        rel_error_raw: relative_error(vqe.energy, e_exact).map_err(at)?,
        rel_error_mitigated: e_mitigated
            .map(|e| relative_error(e, e_exact))
            .transpose()
            .map_err(at)?,
    };
    let diagnostics = PointDiagnostics {
        u,
        seed,
        evaluations: vqe.evaluations,
        converged: vqe.converged,
        parameters: vqe.parameters,
        mitigation,
        history: vqe.history,
    };
    Ok((record, diagnostics))
}

/// Oracle summary at a single coupling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "E_exact")]
    pub e_exact: f64,
    /// Lowest-interaction occupation pattern and its energy.
    pub classical_bitmask: u64,
    #[serde(rename = "E_classical")]
    pub e_classical: f64,
    pub v_nearest: f64,
    pub v_antipodal: f64,
    pub localised: bool,
}

pub fn exact_report(ring: &RingConfig) -> Result<ExactReport> {
    let h = build_sector_hamiltonian(ring)?;
    let classical = diagonal_minimum(&h);
    let threshold = analyze_threshold(ring)?;
    Ok(ExactReport {
        u: ring.interaction,
        e_exact: ground_state(&h)?.energy,
        classical_bitmask: classical.bitmask,
        e_classical: classical.energy,
        v_nearest: threshold.v_nearest,
        v_antipodal: threshold.v_antipodal,
        localised: threshold.localised,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_steps_by_five() {
        let grid = SweepConfig::default().grid();
        assert_eq!(grid, (1..=15).map(|k| 5.0 * k as f64).collect::<Vec<_>>());
    }

    #[test]
    fn uneven_grid_hits_both_endpoints() {
        let cfg = SweepConfig {
            u_min: 0.3,
            u_max: 1.0,
            points: 7,
            ..SweepConfig::default()
        };
        let grid = cfg.grid();
        assert_eq!((grid[0], grid[6]), (0.3, 1.0));
        for (k, u) in grid.iter().enumerate() {
            assert!((u - (0.3 + 0.7 * k as f64 / 6.0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn degenerate_sweep_rules() {
        let mut cfg = SweepConfig {
            points: 1,
            u_min: 45.0,
            u_max: 45.0,
            ..SweepConfig::default()
        };
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.grid(), vec![45.0]);
        cfg.u_max = 50.0;
        assert!(cfg.validate().is_err());
        cfg.points = 0;
        assert!(cfg.validate().is_err());
        cfg.points = 3;
        cfg.u_min = 60.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn exact_report_at_threshold() {
        let r = exact_report(&RingConfig::default().with_interaction(45.0)).unwrap();
        assert_eq!(r.classical_bitmask, 0b001001);
        assert!(r.localised);
        assert!(r.e_exact < r.e_classical);
    }
}
