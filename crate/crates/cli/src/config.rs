//! The run configuration file and its command-line overrides.
//!
//! Ring parameters and sweep bounds are flat keys; `[ansatz]`, `[optimizer]`,
//! `[noise]` and `[mitigation]` are sections. Every key is optional. Flags
//! win over the file, the file wins over built-in defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};
use wigner_core::circuit::NoiseModel;
use wigner_core::mitigation::{ExtrapolationFit, MitigationConfig};
use wigner_core::model::{RingConfig, Statistics};
use wigner_core::vqe::{AnsatzKind, OptimizerConfig};

use crate::sweep::{AnsatzSettings, SweepConfig};
use crate::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sites: usize,
    pub electrons: usize,
    pub hopping: f64,
    /// Coupling for the single-point `exact` and `vqe` runs.
    pub interaction: f64,
    pub statistics: Statistics,
    pub u_min: f64,
    pub u_max: f64,
    pub points: usize,
    pub seed: u64,
    pub warm_start: bool,
    pub ansatz: AnsatzSettings,
    pub optimizer: OptimizerSection,
    pub noise: NoiseSection,
    pub mitigation: MitigationConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSection {
    pub rho_begin: f64,
    pub rho_end: f64,
    pub max_evaluations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub enabled: bool,
    pub p1: f64,
    pub p2: f64,
    pub p_idle: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ring = RingConfig::default();
        let sweep = SweepConfig::default();
        RunConfig {
            sites: ring.sites,
            electrons: ring.electrons,
            hopping: ring.hopping,
            interaction: 45.0,
            statistics: ring.statistics,
            u_min: sweep.u_min,
            u_max: sweep.u_max,
            points: sweep.points,
            seed: sweep.seed,
            warm_start: sweep.warm_start,
            ansatz: sweep.ansatz,
            optimizer: OptimizerSection::default(),
            noise: NoiseSection::default(),
            mitigation: sweep.mitigation,
        }
    }
}

impl Default for OptimizerSection {
    fn default() -> Self {
        let o = OptimizerConfig::default();
        OptimizerSection {
            rho_begin: o.rho_begin,
            rho_end: o.rho_end,
            max_evaluations: o.max_evaluations,
        }
    }
}

impl Default for NoiseSection {
    fn default() -> Self {
        let n = NoiseModel::default();
        NoiseSection {
            enabled: true,
            p1: n.p1,
            p2: n.p2,
            p_idle: n.p_idle,
        }
    }
}

/// Command-line values that replace file or default settings when present.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub interaction: Option<f64>,
    pub statistics: Option<Statistics>,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub cold_start: bool,
    pub ansatz: Option<AnsatzKind>,
    pub layers: Option<usize>,
    pub max_evaluations: Option<usize>,
    pub noiseless: bool,
    pub no_mitigation: bool,
    pub no_dd: bool,
    pub fit: Option<ExtrapolationFit>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|source| CliError::ConfigFile {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain data serialises")
    }

    pub fn apply(&mut self, o: &Overrides) {
        fn set<T: Clone>(slot: &mut T, value: &Option<T>) {
            if let Some(v) = value {
                *slot = v.clone();
            }
        }
        set(&mut self.interaction, &o.interaction);
        set(&mut self.statistics, &o.statistics);
        set(&mut self.u_min, &o.u_min);
        set(&mut self.u_max, &o.u_max);
        set(&mut self.points, &o.points);
        set(&mut self.seed, &o.seed);
        set(&mut self.ansatz.kind, &o.ansatz);
        set(&mut self.ansatz.layers, &o.layers);
        set(&mut self.optimizer.max_evaluations, &o.max_evaluations);
        set(&mut self.mitigation.fit, &o.fit);
        if o.cold_start {
            self.warm_start = false;
        }
        if o.noiseless {
            self.noise.enabled = false;
        }
        if o.no_mitigation {
            self.mitigation.zne_enabled = false;
            self.mitigation.dd_enabled = false;
        }
        if o.no_dd {
            self.mitigation.dd_enabled = false;
        }
    }

    /// Ring at the single-point coupling.
    pub fn ring(&self) -> RingConfig {
        RingConfig {
            sites: self.sites,
            electrons: self.electrons,
            hopping: self.hopping,
            interaction: self.interaction,
            statistics: self.statistics,
        }
    }

    pub fn noise_model(&self) -> Option<NoiseModel> {
        self.noise.enabled.then_some(NoiseModel {
            p1: self.noise.p1,
            p2: self.noise.p2,
            p_idle: self.noise.p_idle,
        })
    }

    /// The sweep described by this file, validated.
    pub fn sweep(&self) -> Result<SweepConfig> {
        let cfg = SweepConfig {
            u_min: self.u_min,
            u_max: self.u_max,
            points: self.points,
            ring: self.ring(),
            ansatz: self.ansatz.clone(),
            optimizer: OptimizerConfig {
                rho_begin: self.optimizer.rho_begin,
                rho_end: self.optimizer.rho_end,
                max_evaluations: self.optimizer.max_evaluations,
                seed: self.seed,
            },
            noise: self.noise_model(),
            mitigation: self.mitigation.clone(),
            seed: self.seed,
            warm_start: self.warm_start,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// A one-point sweep at [`RunConfig::interaction`].
    pub fn single_point(&self) -> Result<SweepConfig> {
        let mut cfg = self.clone();
        cfg.u_min = self.interaction;
        cfg.u_max = self.interaction;
        cfg.points = 1;
        cfg.sweep()
    }
}
