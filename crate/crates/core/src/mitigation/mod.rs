//! Error mitigation: circuit inversion, global unitary folding, zero-noise
//! extrapolation and dynamical decoupling on idle windows.

mod dd;
mod zne;

pub use dd::insert_dd;
pub use zne::{zne_extrapolate, Extrapolation, ExtrapolationFit};

use serde::{Deserialize, Serialize};

use crate::circuit::{circuit_energy, Circuit, NoiseModel};
use crate::model::PauliHamiltonian;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MitigationConfig {
    pub zne_enabled: bool,
    /// Odd noise-scale factors, strictly increasing from 1.
    pub scale_factors: Vec<usize>,
    pub fit: ExtrapolationFit,
    pub dd_enabled: bool,
}

impl Default for MitigationConfig {
    fn default() -> Self {
        MitigationConfig {
            zne_enabled: true,
            scale_factors: vec![1, 3, 5],
            fit: ExtrapolationFit::Richardson,
            dd_enabled: true,
        }
    }
}

impl MitigationConfig {
    pub fn disabled() -> Self {
        MitigationConfig {
            zne_enabled: false,
            dd_enabled: false,
            ..Self::default()
        }
    }

    pub fn is_active(&self) -> bool {
        self.zne_enabled || self.dd_enabled
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.scale_factors;
        if f.first() != Some(&1) {
            return Err(Error::domain("scale factors must start at 1"));
        }
        if let Some(even) = f.iter().find(|l| *l % 2 == 0) {
            return Err(Error::domain(format!("scale factor {even} is not odd")));
        }
        if f.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("scale factors must be strictly increasing"));
        }
        if self.zne_enabled && f.len() < 2 {
            return Err(Error::domain("extrapolation needs at least two scale factors"));
        }
        Ok(())
    }
}

/// Gate order reversed, each gate replaced by its inverse.
pub fn invert(circuit: &Circuit) -> Circuit {
    let gates = circuit.gates().iter().rev().map(|g| g.inverse()).collect();
    Circuit::from_gates(circuit.qubits(), gates).expect("inverse gates act on the same qubits")
}

/// `G (G† G)^((λ-1)/2)`: the same ideal unitary with `λ` times the gates.
pub fn fold_global(circuit: &Circuit, scale: usize) -> Result<Circuit> {
    if scale % 2 == 0 {
        return Err(Error::domain(format!(
            "fold scale must be odd and positive, got {scale}"
        )));
    }
    let inverse = invert(circuit);
    let mut out = circuit.clone();
    for _ in 0..(scale - 1) / 2 {
        out.extend_from(&inverse)?;
        out.extend_from(circuit)?;
    }
    Ok(out)
}

/// Energies behind one mitigated estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MitigatedEstimate {
    pub energy: f64,
    pub scale_factors: Vec<usize>,
    /// Measured energy at each scale factor.
    pub scaled_energies: Vec<f64>,
    pub fit: Option<Extrapolation>,
}

/// Evaluates `circuit` with the configured mitigation. With ZNE on, every
/// scale factor is folded first and DD (if on) is inserted into the folded
/// circuit; without ZNE only the unfolded circuit is run.
pub fn mitigated_energy(
    circuit: &Circuit,
    h: &PauliHamiltonian,
    noise: Option<&NoiseModel>,
    cfg: &MitigationConfig,
) -> Result<MitigatedEstimate> {
    cfg.validate()?;
    let scales: &[usize] = if cfg.zne_enabled { &cfg.scale_factors } else { &[1] };
    let mut scaled_energies = Vec::with_capacity(scales.len());
    for &scale in scales {
        let mut folded = fold_global(circuit, scale)?;
        if cfg.dd_enabled {
            folded = insert_dd(&folded);
        }
        scaled_energies.push(circuit_energy(&folded, h, noise)?);
    }
    let (energy, fit) = if cfg.zne_enabled {
        let points: Vec<(f64, f64)> = scales
            .iter()
            .map(|&s| s as f64)
            .zip(scaled_energies.iter().copied())
            .collect();
        let fit = zne_extrapolate(&points, cfg.fit)?;
        (fit.value, Some(fit))
    } else {
        (scaled_energies[0], None)
    };
    Ok(MitigatedEstimate {
        energy,
        scale_factors: scales.to_vec(),
        scaled_energies,
        fit,
    })
}
