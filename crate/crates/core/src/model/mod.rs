//! Ring geometry, the long-range Coulomb interaction and the system
//! Hamiltonian in both sector-matrix and Pauli-operator form.

mod pauli;

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::exact::enumerate_basis;
use crate::numfmt::significant;
use crate::{Error, Result};

pub use pauli::{build_pauli_hamiltonian, number_penalty, PauliHamiltonian, PauliString, PauliTerm};

/// Interaction strength at and above which the dimer is reported as localised.
pub const LOCALISATION_THRESHOLD: f64 = 45.0;

/// How particles exchange when they hop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistics {
    /// One qubit per site, no exchange sign.
    #[default]
    HardcoreBoson,
    /// Jordan–Wigner fermions with a site-ordered parity string.
    SpinlessFermion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RingConfig {
    pub sites: usize,
    pub electrons: usize,
    pub hopping: f64,
    pub interaction: f64,
    pub statistics: Statistics,
}

impl Default for RingConfig {
    fn default() -> Self {
        RingConfig {
            sites: 6,
            electrons: 2,
            hopping: 1.0,
            interaction: 0.0,
            statistics: Statistics::HardcoreBoson,
        }
    }
}

impl RingConfig {
    pub fn new(sites: usize, electrons: usize, interaction: f64, statistics: Statistics) -> Result<Self> {
        let cfg = RingConfig {
            sites,
            electrons,
            hopping: 1.0,
            interaction,
            statistics,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The same ring at a different interaction strength.
    pub fn with_interaction(&self, interaction: f64) -> Self {
        RingConfig {
            interaction,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 3 {
            return Err(Error::domain(format!(
                "a ring needs at least 3 sites, got {}",
                self.sites
            )));
        }
        // Bitmasks are u64 and dense operators are 2^M wide.
        if self.sites > 20 {
            return Err(Error::domain(format!(
                "at most 20 sites are supported, got {}",
                self.sites
            )));
        }
        if self.electrons == 0 || self.electrons >= self.sites {
            return Err(Error::domain(format!(
                "need 0 < electrons < sites, got {} electrons on {} sites",
                self.electrons, self.sites
            )));
        }
        if !(self.hopping.is_finite() && self.hopping > 0.0) {
            return Err(Error::domain(format!("hopping must be positive, got {}", self.hopping)));
        }
        if !(self.interaction.is_finite() && self.interaction >= 0.0) {
            return Err(Error::domain(format!(
                "interaction must be non-negative, got {}",
                self.interaction
            )));
        }
        Ok(())
    }

    /// Ring edges `(i, i+1 mod M)` in site order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.sites).map(move |i| (i, (i + 1) % self.sites))
    }
}

/// Straight-line distance between sites `i` and `j` of an `m`-site ring whose
/// nearest-neighbour arc length is one lattice unit.
///
/// The separation is reduced to the shorter way round the ring before use.
pub fn chord_distance(m: usize, i: usize, j: usize) -> Result<f64> {
    if m == 0 || i >= m || j >= m {
        return Err(Error::domain(format!(
            "sites ({i}, {j}) out of range for a {m}-site ring"
        )));
    }
    if i == j {
        return Err(Error::domain(format!(
            "chord distance undefined for the self-pair ({i}, {i})"
        )));
    }
    let d = i.abs_diff(j);
    let d = d.min(m - d);
    let m = m as f64;
    Ok(m / PI * (PI * d as f64 / m).sin())
}

/// Symmetric pair-interaction matrix `V[i][j] = U / r_ij` with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionMatrix {
    sites: usize,
    values: Vec<f64>,
}

impl InteractionMatrix {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.sites + j]
    }

    /// Interaction energy of an occupation pattern: sum of `V[i][j]` over
    /// occupied pairs `i < j`.
    pub fn pattern_energy(&self, mask: u64) -> f64 {
        let mut energy = 0.0;
        for i in 0..self.sites {
            if mask >> i & 1 == 0 {
                continue;
            }
            for j in i + 1..self.sites {
                if mask >> j & 1 == 1 {
                    energy += self.get(i, j);
                }
            }
        }
        energy
    }

    /// One pair per line, `<V_ij> <i> <j>` for `i < j`, values to 12
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.sites {
            for j in i + 1..self.sites {
                writeln!(out, "{} {} {}", significant(self.get(i, j), 12), i, j).unwrap();
            }
        }
        out
    }
}

pub fn build_interaction_matrix(cfg: &RingConfig) -> Result<InteractionMatrix> {
    cfg.validate()?;
    let m = cfg.sites;
    let mut values = vec![0.0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let v = cfg.interaction / chord_distance(m, i, j)?;
            values[i * m + j] = v;
            values[j * m + i] = v;
        }
    }
    Ok(InteractionMatrix { sites: m, values })
}

/// Dense Hamiltonian on the fixed-particle-number sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorHamiltonian {
    basis: Vec<u64>,
    matrix: Vec<f64>,
}

impl SectorHamiltonian {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Occupation bitmasks in increasing order.
    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    /// Row-major `dimension × dimension` entries.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.basis.len() + col]
    }

    pub fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dimension()).map(|k| self.get(k, k))
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.basis.binary_search(&mask).ok()
    }

    /// Assembles from a basis and a row-major matrix; used by tests and
    /// callers that build their own sector operators.
    pub fn from_parts(basis: Vec<u64>, matrix: Vec<f64>) -> Result<Self> {
        let n = basis.len();
        if matrix.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: matrix.len(),
            });
        }
        if basis.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("basis must be strictly increasing"));
        }
        for r in 0..n {
            for c in 0..r {
                if (matrix[r * n + c] - matrix[c * n + r]).abs() > 1e-12 {
                    return Err(Error::domain(format!("matrix not symmetric at ({r}, {c})")));
                }
            }
        }
        Ok(SectorHamiltonian { basis, matrix })
    }
}

/// Builds the sector matrix directly from occupation patterns.
///
/// Hops run along ring edges with amplitude `-t`. For spinless fermions the
/// creation/annihilation pair `c†_d c_s` picks up `(-1)^k`, where `k` counts
/// occupied sites strictly between `s` and `d` in site order; only the
/// boundary edge `(M-1, 0)` can have such sites.
pub fn build_sector_hamiltonian(cfg: &RingConfig) -> Result<SectorHamiltonian> {
    let interaction = build_interaction_matrix(cfg)?;
    let basis = enumerate_basis(cfg.sites, cfg.electrons)?;
    let n = basis.len();
    let mut matrix = vec![0.0; n * n];
    for (col, &mask) in basis.iter().enumerate() {
        matrix[col * n + col] = interaction.pattern_energy(mask);
        for (i, j) in cfg.edges() {
            let (occ_i, occ_j) = (mask >> i & 1, mask >> j & 1);
            if occ_i == occ_j {
                continue;
            }
            let target = mask ^ (1 << i) ^ (1 << j);
            let row = basis.binary_search(&target).expect("hop preserves particle number");
            let sign = match cfg.statistics {
                Statistics::HardcoreBoson => 1.0,
                Statistics::SpinlessFermion => {
                    let (lo, hi) = (i.min(j), i.max(j));
                    let between = (mask >> (lo + 1)) & ((1u64 << (hi - lo - 1)) - 1);
                    if between.count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            matrix[row * n + col] += -cfg.hopping * sign;
        }
    }
    Ok(SectorHamiltonian { basis, matrix })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub v_nearest: f64,
    pub v_antipodal: f64,
    /// Width of the single-particle band, `4t`.
    pub bandwidth: f64,
    /// `U >= 45`, the empirical localisation criterion.
    pub localised: bool,
}

pub fn analyze_threshold(cfg: &RingConfig) -> Result<ThresholdReport> {
    if cfg.sites % 2 == 1 {
        return Err(Error::domain(format!(
            "odd ring of {} sites has no antipodal site",
            cfg.sites
        )));
    }
    let v = build_interaction_matrix(cfg)?;
    Ok(ThresholdReport {
        v_nearest: v.get(0, 1),
        v_antipodal: v.get(0, cfg.sites / 2),
        bandwidth: 4.0 * cfg.hopping,
        localised: cfg.interaction >= LOCALISATION_THRESHOLD,
    })
}
