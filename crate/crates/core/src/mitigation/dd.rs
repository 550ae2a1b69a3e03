use crate::circuit::{schedule, Circuit, Gate};

/// Pads idle windows with X–X pairs.
///
/// A window is a maximal run of at least two moments in which a qubit is idle
/// after its first gate (trailing runs included). A window of `w` moments
/// gets `w / 2` back-to-back X pairs, listed right after the gate that opens
/// it; ASAP scheduling packs them from the window's first moment, so the
/// moments of every original gate and the circuit depth are unchanged and at
/// most one idle moment per window is left over. Running the pass twice
/// therefore adds nothing.
pub fn insert_dd(circuit: &Circuit) -> Circuit {
    let sched = schedule(circuit);
    let busy = sched.occupancy(circuit);
    let depth = sched.depth();
    // Pulses to append after each gate index.
    let mut pulses: Vec<Vec<usize>> = vec![Vec::new(); circuit.len()];

    for q in 0..circuit.qubits() {
        let Some(first) = (0..depth).find(|&m| busy[m][q]) else {
            continue;
        };
        let mut m = first + 1;
        while m < depth {
            if busy[m][q] {
                m += 1;
                continue;
            }
            let start = m;
            while m < depth && !busy[m][q] {
                m += 1;
            }
            if m - start >= 2 {
                let opener = sched.moments()[start - 1]
                    .iter()
                    .copied()
                    .find(|&g| circuit.gates()[g].targets().contains(&q))
                    .expect("qubit is busy in the moment before its idle window");
                pulses[opener].extend(std::iter::repeat_n(q, (m - start) / 2));
            }
        }
    }

    let mut gates = Vec::with_capacity(circuit.len());
    for (k, g) in circuit.gates().iter().enumerate() {
        gates.push(*g);
        for &q in &pulses[k] {
            gates.push(Gate::X(q));
            gates.push(Gate::X(q));
        }
    }
    Circuit::from_gates(circuit.qubits(), gates).expect("pulses target existing qubits")
}
