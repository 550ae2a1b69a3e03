use super::Circuit;

/// ASAP layering of a circuit into moments of gate indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    moments: Vec<Vec<usize>>,
    /// Moment of each gate, by gate index.
    placement: Vec<usize>,
}

impl Schedule {
    pub fn moments(&self) -> &[Vec<usize>] {
        &self.moments
    }

    pub fn depth(&self) -> usize {
        self.moments.len()
    }

    pub fn moment_of(&self, gate: usize) -> usize {
        self.placement[gate]
    }

    /// `busy[m][q]` is true when qubit `q` is acted on in moment `m`.
    pub fn occupancy(&self, circuit: &Circuit) -> Vec<Vec<bool>> {
        let mut busy = vec![vec![false; circuit.qubits()]; self.depth()];
        for (m, gates) in self.moments.iter().enumerate() {
            for &g in gates {
                for &q in circuit.gates()[g].targets().iter() {
                    busy[m][q] = true;
                }
            }
        }
        busy
    }
}

/// Places each gate in the earliest moment after every earlier gate that
/// shares a qubit with it.
pub fn schedule(circuit: &Circuit) -> Schedule {
    let mut next_free = vec![0usize; circuit.qubits()];
    let mut moments: Vec<Vec<usize>> = Vec::new();
    let mut placement = Vec::with_capacity(circuit.len());
    for (k, gate) in circuit.gates().iter().enumerate() {
        let targets = gate.targets();
        let m = targets.iter().map(|&q| next_free[q]).max().unwrap_or(0);
        if m == moments.len() {
            moments.push(Vec::new());
        }
        moments[m].push(k);
        placement.push(m);
        for &q in targets.iter() {
            next_free[q] = m + 1;
        }
    }
    Schedule { moments, placement }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn asap_layering() {
        let c = Circuit::from_gates(2, vec![Gate::X(0), Gate::X(1)]).unwrap();
        assert_eq!(schedule(&c).moments(), &[vec![0, 1]]);

        let c = Circuit::from_gates(1, vec![Gate::X(0), Gate::X(0)]).unwrap();
        assert_eq!(schedule(&c).moments(), &[vec![0], vec![1]]);

        let c = Circuit::from_gates(3, vec![Gate::Cz(0, 1), Gate::X(2), Gate::X(0)]).unwrap();
        let s = schedule(&c);
        assert_eq!(s.moments(), &[vec![0, 1], vec![2]]);
        assert_eq!(s.moment_of(2), 1);
        let busy = s.occupancy(&c);
        assert_eq!(busy[1], vec![true, false, false]);
    }

    #[test]
    fn empty_circuit_has_no_moments() {
        assert_eq!(schedule(&Circuit::new(3)).depth(), 0);
    }
}
