use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use wigner_core::circuit::*;
use wigner_core::model::{build_pauli_hamiltonian, RingConfig, Statistics};

const QUBITS: usize = 4;

fn any_gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
    let angle = -6.3f64..6.3;
    prop_oneof![
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::Y),
        q.clone().prop_map(Gate::Z),
        q.clone().prop_map(Gate::H),
        (q.clone(), angle.clone()).prop_map(|(q, t)| Gate::Rx(q, t)),
        (q.clone(), angle.clone()).prop_map(|(q, t)| Gate::Ry(q, t)),
        (q, angle.clone()).prop_map(|(q, t)| Gate::Rz(q, t)),
        pair.clone().prop_map(|(a, b)| Gate::Cz(a, b)),
        pair.clone().prop_map(|(a, b)| Gate::Cnot(a, b)),
        (pair, angle).prop_map(|((a, b), t)| Gate::XxPlusYy(a, b, t)),
    ]
}

fn number_preserving_gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
    prop_oneof![
        q.clone().prop_map(Gate::Z),
        (q, -6.3f64..6.3).prop_map(|(q, t)| Gate::Rz(q, t)),
        pair.clone().prop_map(|(a, b)| Gate::Cz(a, b)),
        (pair, -6.3f64..6.3).prop_map(|((a, b), t)| Gate::XxPlusYy(a, b, t)),
    ]
}

fn circuit(n: usize, max: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(any_gate(n), 0..=max).prop_map(move |g| Circuit::from_gates(n, g).unwrap())
}

fn random_state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("zero vector", move |raw| {
        let norm: f64 = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| {
            let amps = raw.iter().map(|(a, b)| Complex64::new(a / norm, b / norm)).collect();
            StateVector::from_amplitudes(n, amps).unwrap()
        })
    })
}

fn noise() -> impl Strategy<Value = NoiseModel> {
    (0.0f64..0.3, 0.0f64..0.3, 0.0f64..0.5).prop_map(|(p1, p2, p_idle)| NoiseModel { p1, p2, p_idle })
}

fn min_eigenvalue(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let m = DMatrix::from_row_slice(d, d, rho.entries());
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn ring_hamiltonian() -> wigner_core::model::PauliHamiltonian {
    build_pauli_hamiltonian(&RingConfig::new(QUBITS, 2, 5.0, Statistics::HardcoreBoson).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pure_evolution_preserves_norm(c in circuit(QUBITS, 100), psi in random_state(QUBITS)) {
        let out = apply_circuit(&psi, &c).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn noisy_evolution_is_a_channel(c in circuit(QUBITS, 30), psi in random_state(QUBITS), n in noise()) {
        let out = apply_circuit_noisy(&DensityMatrix::from_pure(&psi), &c, &n).unwrap();
        prop_assert!((out.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        prop_assert!(out.hermiticity_defect() <= 1e-12);
        prop_assert!(min_eigenvalue(&out) >= -1e-10);
    }

    #[test]
    fn zero_noise_matches_statevector(c in circuit(QUBITS, 40), psi in random_state(QUBITS)) {
        let h = ring_hamiltonian();
        let pure = expectation(&apply_circuit(&psi, &c).unwrap(), &h).unwrap();
        let mixed = apply_circuit_noisy(&DensityMatrix::from_pure(&psi), &c, &NoiseModel::noiseless()).unwrap();
        prop_assert!((pure - expectation(&mixed, &h).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn diagonal_and_hopping_gates_conserve_excitations(
        gates in prop::collection::vec(number_preserving_gate(6), 0..60),
        start in 0u64..64,
    ) {
        let c = Circuit::from_gates(6, gates).unwrap();
        let out = apply_circuit(&StateVector::basis(6, start), &c).unwrap();
        prop_assert!((out.mean_excitations() - start.count_ones() as f64).abs() <= 1e-10);
    }

    #[test]
    fn schedule_places_each_gate_once_in_order(c in circuit(5, 60)) {
        let s = schedule(&c);
        let mut seen = vec![0usize; c.len()];
        for (t, moment) in s.moments().iter().enumerate() {
            let mut busy = [false; 5];
            for &g in moment {
                seen[g] += 1;
                prop_assert_eq!(s.moment_of(g), t);
                for &q in c.gates()[g].targets().iter() {
                    prop_assert!(!busy[q], "qubit {} used twice in moment {}", q, t);
                    busy[q] = true;
                }
            }
        }
        prop_assert!(seen.iter().all(|&k| k == 1));
        // Gates sharing a qubit keep their program order.
        for (i, a) in c.gates().iter().enumerate() {
            for (j, b) in c.gates().iter().enumerate().skip(i + 1) {
                if a.targets().iter().any(|q| b.targets().contains(q)) {
                    prop_assert!(s.moment_of(i) < s.moment_of(j));
                }
            }
        }
    }

    #[test]
    fn circuit_text_round_trips(c in circuit(QUBITS, 30)) {
        let back = Circuit::from_text(QUBITS, &c.to_text()).unwrap();
        prop_assert_eq!(back.len(), c.len());
        for (a, b) in back.gates().iter().zip(c.gates()) {
            prop_assert_eq!(a.name(), b.name());
            prop_assert_eq!(&*a.targets(), &*b.targets());
            prop_assert!((a.angle().unwrap_or(0.0) - b.angle().unwrap_or(0.0)).abs() <= 1e-12);
        }
    }
}

#[test]
fn shot_estimate_converges_to_exact_expectation() {
    let c = Circuit::from_gates(
        QUBITS,
        vec![
            Gate::X(0),
            Gate::XxPlusYy(0, 1, 1.1),
            Gate::X(2),
            Gate::XxPlusYy(2, 3, -0.4),
            Gate::H(1),
        ],
    )
    .unwrap();
    let psi = apply_circuit(&StateVector::new(QUBITS), &c).unwrap();
    let h = ring_hamiltonian();
    let exact = expectation(&psi, &h).unwrap();
    let sampled = sample_expectation(&psi, &h, 200_000, 11).unwrap();
    assert!((exact - sampled).abs() < 0.05, "{exact} vs {sampled}");
    assert_eq!(sampled, sample_expectation(&psi, &h, 200_000, 11).unwrap());
}
