//! Gate-level circuits, ASAP scheduling, and pure/mixed-state simulation.

mod gate;
mod noise;
mod schedule;
mod state;

pub use gate::{Gate, Targets};
pub use noise::{apply_circuit_noisy, circuit_energy, NoiseModel};
pub use schedule::{schedule, Schedule};
pub use state::{apply_circuit, expectation, sample_expectation, DensityMatrix, QuantumState, StateVector};

use std::fmt::Write as _;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Circuit {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Appends a gate after checking its targets against the register.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends every gate of `other`.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<()> {
        if other.qubits != self.qubits {
            return Err(Error::DimensionMismatch {
                expected: self.qubits,
                actual: other.qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// One gate per line: `KIND angle? q0 q1?`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            writeln!(out, "{g}").unwrap();
        }
        out
    }

    /// Parses the [`to_text`](Self::to_text) format. Blank lines and `#`
    /// comments are skipped.
    pub fn from_text(qubits: usize, text: &str) -> Result<Self> {
        let mut c = Circuit::new(qubits);
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let gate: Gate = line.parse().map_err(|e: Error| Error::Parse {
                line: k + 1,
                message: e.to_string(),
            })?;
            c.push(gate).map_err(|e| Error::Parse {
                line: k + 1,
                message: e.to_string(),
            })?;
        }
        Ok(c)
    }
}
