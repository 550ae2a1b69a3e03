use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::exact::diagonal_minimum;
use crate::model::{build_sector_hamiltonian, RingConfig};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzKind {
    /// RY layers interleaved with CZ on every ring edge.
    HardwareEfficient,
    /// Excitation-preserving XX+YY rotations on ring edges, each followed by
    /// a CZ on the same edge.
    #[default]
    NumberPreserving,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub kind: AnsatzKind,
    pub layers: usize,
    pub qubits: usize,
    /// Occupation bitmask prepared with X gates before the first layer.
    pub initial_state: u64,
}

impl AnsatzSpec {
    /// Spec for `cfg`'s ring. The number-preserving ansatz starts from the
    /// classical minimum-interaction configuration at `cfg`'s coupling.
    pub fn for_ring(cfg: &RingConfig, kind: AnsatzKind, layers: usize) -> Result<Self> {
        let initial_state = match kind {
            AnsatzKind::HardwareEfficient => 0,
            AnsatzKind::NumberPreserving => diagonal_minimum(&build_sector_hamiltonian(cfg)?).bitmask,
        };
        let spec = AnsatzSpec {
            kind,
            layers,
            qubits: cfg.sites,
            initial_state,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn parameter_count(&self) -> usize {
        match self.kind {
            AnsatzKind::HardwareEfficient => self.qubits * (self.layers + 1),
            AnsatzKind::NumberPreserving => self.qubits * self.layers,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(Error::domain("ansatz needs at least one layer"));
        }
        if self.qubits < 3 || self.qubits > 20 {
            return Err(Error::domain(format!(
                "ansatz needs a ring of 3..=20 qubits, got {}",
                self.qubits
            )));
        }
        if self.initial_state >> self.qubits != 0 {
            return Err(Error::domain(format!(
                "initial state {:#b} does not fit in {} qubits",
                self.initial_state, self.qubits
            )));
        }
        match self.kind {
            AnsatzKind::HardwareEfficient if self.initial_state != 0 => {
                Err(Error::domain("hardware-efficient ansatz starts from |0...0>"))
            }
            AnsatzKind::NumberPreserving if self.initial_state == 0 => Err(Error::domain(
                "number-preserving ansatz needs at least one initial excitation",
            )),
            _ => Ok(()),
        }
    }
}

/// Ring edges with even index first, then odd, each as `(e, e + 1 mod M)`.
fn edge_order(qubits: usize) -> impl Iterator<Item = usize> {
    (0..qubits).step_by(2).chain((1..qubits).step_by(2))
}

pub fn build_ansatz(spec: &AnsatzSpec, params: &[f64]) -> Result<Circuit> {
    spec.validate()?;
    if params.len() != spec.parameter_count() {
        return Err(Error::DimensionMismatch {
            expected: spec.parameter_count(),
            actual: params.len(),
        });
    }
    let m = spec.qubits;
    let mut c = Circuit::new(m);
    match spec.kind {
        AnsatzKind::HardwareEfficient => {
            for (k, layer) in params.chunks(m).enumerate() {
                for (q, &theta) in layer.iter().enumerate() {
                    c.push(Gate::Ry(q, theta))?;
                }
                if k < spec.layers {
                    for e in 0..m {
                        c.push(Gate::Cz(e, (e + 1) % m))?;
                    }
                }
            }
        }
        AnsatzKind::NumberPreserving => {
            for q in (0..m).filter(|q| spec.initial_state >> q & 1 == 1) {
                c.push(Gate::X(q))?;
            }
            // A bare XX+YY rotation multiplies each hopped amplitude by -i, and
            // from a real state the hopping energy is then stationary at zero
            // angle. Conjugating by S on one site of the edge makes the rotation
            // real. On an even ring every edge joins an even and an odd site, so
            // a single S-dagger layer on odd sites at the end does the same job.
            let bipartite = m % 2 == 0;
            for layer in params.chunks(m) {
                for e in edge_order(m) {
                    let (a, b) = (e, (e + 1) % m);
                    if !bipartite {
                        c.push(Gate::Rz(b, FRAC_PI_2))?;
                    }
                    c.push(Gate::XxPlusYy(a, b, layer[e]))?;
                    if !bipartite {
                        c.push(Gate::Rz(b, -FRAC_PI_2))?;
                    }
                    // Nearest-neighbour XX+YY alone is a free-fermion circuit and
                    // cannot get past the best single Slater determinant; the CZ
                    // supplies the missing interaction.
                    c.push(Gate::Cz(a, b))?;
                }
            }
            if bipartite {
                for q in (1..m).step_by(2) {
                    c.push(Gate::Rz(q, -FRAC_PI_2))?;
                }
            }
        }
    }
    Ok(c)
}
