use serde::{Deserialize, Serialize};

use super::{apply_circuit, expectation, schedule, Circuit, DensityMatrix, QuantumState, StateVector};
use crate::model::PauliHamiltonian;
use crate::{Error, Result};

/// Gate depolarizing plus idle dephasing.
///
/// `p1`/`p2` are depolarizing probabilities applied after every one-/two-qubit
/// gate; `p_idle` is a phase-flip probability applied to every qubit that is
/// not acted on during a moment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p_idle: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            p1: 1e-3,
            p2: 8e-3,
            p_idle: 2e-3,
        }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            p_idle: 0.0,
        }
    }

    /// Dephasing on idle qubits only.
    pub fn idle_only(p_idle: f64) -> Self {
        NoiseModel {
            p_idle,
            ..Self::noiseless()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2), ("p_idle", self.p_idle)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::domain(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }
}

/// Evolves `rho` moment by moment along the ASAP schedule of `circuit`: each
/// gate's unitary followed by depolarizing on its targets, then a phase flip
/// on every idle qubit.
pub fn apply_circuit_noisy(rho: &DensityMatrix, circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    noise.validate()?;
    if rho.qubits() != circuit.qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.qubits(),
            actual: rho.qubits(),
        });
    }
    let sched = schedule(circuit);
    let mut out = rho.clone();
    for (moment, busy) in sched.moments().iter().zip(sched.occupancy(circuit)) {
        for &k in moment {
            let gate = &circuit.gates()[k];
            out.apply_gate(gate)?;
            let p = if gate.arity() == 1 { noise.p1 } else { noise.p2 };
            out.depolarize(&gate.targets(), p);
        }
        for (q, _) in busy.iter().enumerate().filter(|(_, b)| !**b) {
            out.phase_flip(q, noise.p_idle);
        }
    }
    Ok(out)
}

/// Energy of `circuit` applied to `|0...0>`: exact statevector evolution when
/// `noise` is `None`, density-matrix evolution otherwise.
pub fn circuit_energy(circuit: &Circuit, h: &PauliHamiltonian, noise: Option<&NoiseModel>) -> Result<f64> {
    let start = StateVector::new(circuit.qubits());
    match noise {
        None => expectation(&apply_circuit(&start, circuit)?, h),
        Some(noise) => {
            let rho = apply_circuit_noisy(&DensityMatrix::from_pure(&start), circuit, noise)?;
            expectation(&rho, h)
        }
    }
}
