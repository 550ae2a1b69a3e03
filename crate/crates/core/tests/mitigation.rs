use num_complex::Complex64;
use proptest::prelude::*;
use wigner_core::circuit::*;
use wigner_core::mitigation::*;
use wigner_core::model::{build_pauli_hamiltonian, RingConfig, Statistics};
use wigner_core::vqe::{build_ansatz, run_vqe, AnsatzKind, AnsatzSpec, OptimizerConfig};

fn any_gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
    let angle = -6.3f64..6.3;
    prop_oneof![
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::Y),
        q.clone().prop_map(Gate::H),
        (q.clone(), angle.clone()).prop_map(|(q, t)| Gate::Rx(q, t)),
        (q.clone(), angle.clone()).prop_map(|(q, t)| Gate::Ry(q, t)),
        (q, angle.clone()).prop_map(|(q, t)| Gate::Rz(q, t)),
        pair.clone().prop_map(|(a, b)| Gate::Cz(a, b)),
        pair.clone().prop_map(|(a, b)| Gate::Cnot(a, b)),
        (pair, angle).prop_map(|((a, b), t)| Gate::XxPlusYy(a, b, t)),
    ]
}

fn circuit(n: usize, max: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(any_gate(n), 1..=max).prop_map(move |g| Circuit::from_gates(n, g).unwrap())
}

/// Noiseless VQE optimum at the localisation threshold.
fn optimal_circuit() -> (Circuit, wigner_core::model::PauliHamiltonian) {
    let ring = RingConfig::new(6, 2, 45.0, Statistics::HardcoreBoson).unwrap();
    let spec = AnsatzSpec::for_ring(&ring, AnsatzKind::NumberPreserving, 3).unwrap();
    let opt = OptimizerConfig {
        max_evaluations: 1500,
        ..OptimizerConfig::default()
    };
    let r = run_vqe(&ring, &spec, &opt, None, None).unwrap();
    (
        build_ansatz(&spec, &r.parameters).unwrap(),
        build_pauli_hamiltonian(&ring).unwrap(),
    )
}

#[test]
fn folding_and_dd_are_transparent_without_noise() {
    let (c, h) = optimal_circuit();
    let base = circuit_energy(&c, &h, None).unwrap();
    for scale in [1, 3, 5] {
        let folded = fold_global(&c, scale).unwrap();
        assert_eq!(folded.len(), scale * c.len());
        assert!((circuit_energy(&folded, &h, None).unwrap() - base).abs() <= 1e-10);
    }
    let dd = insert_dd(&c);
    assert!((circuit_energy(&dd, &h, None).unwrap() - base).abs() <= 1e-10);
    // The brick layers keep every qubit busy; folding opens idle windows.
    let folded_dd = insert_dd(&fold_global(&c, 3).unwrap());
    assert!(folded_dd.len() > 3 * c.len());
    assert!((circuit_energy(&folded_dd, &h, None).unwrap() - base).abs() <= 1e-10);
    let quiet = NoiseModel::noiseless();
    assert!((circuit_energy(&dd, &h, Some(&quiet)).unwrap() - base).abs() <= 1e-10);
}

#[test]
fn folding_amplifies_depolarizing_error() {
    let (c, h) = optimal_circuit();
    let ideal = circuit_energy(&c, &h, None).unwrap();
    let noise = NoiseModel::default();
    let errors: Vec<f64> = [1, 3, 5]
        .iter()
        .map(|&s| (circuit_energy(&fold_global(&c, s).unwrap(), &h, Some(&noise)).unwrap() - ideal).abs())
        .collect();
    assert!(errors.windows(2).all(|w| w[1] >= w[0]), "{errors:?}");
    assert!(errors[0] > 0.0);
}

#[test]
fn mitigation_beats_raw_at_optimum() {
    let (c, h) = optimal_circuit();
    let ideal = circuit_energy(&c, &h, None).unwrap();
    let noise = NoiseModel::default();
    let raw = circuit_energy(&c, &h, Some(&noise)).unwrap();
    let est = mitigated_energy(&c, &h, Some(&noise), &MitigationConfig::default()).unwrap();
    assert!((est.energy - ideal).abs() < (raw - ideal).abs());
    assert_eq!(est.scaled_energies.len(), 3);
}

#[test]
fn dd_reduces_idle_dephasing_error() {
    // Qubit 0 sits idle for six moments between two entangling gates while
    // qubit 1 keeps working.
    let mut gates = vec![Gate::H(0), Gate::Cnot(0, 1)];
    gates.extend([
        Gate::Rx(1, 0.3),
        Gate::Ry(1, 0.2),
        Gate::Rz(1, 0.5),
        Gate::Rx(1, -0.4),
        Gate::Ry(1, 0.1),
        Gate::Rz(1, 0.7),
    ]);
    gates.push(Gate::Cnot(0, 1));
    gates.push(Gate::H(0));
    let c = Circuit::from_gates(2, gates).unwrap();
    let s = schedule(&c);
    let idle = s.occupancy(&c).iter().filter(|m| !m[0]).count();
    assert!(idle >= 4);

    let h = wigner_core::model::PauliHamiltonian::from_text("1 XI\n0.5 ZZ\n-0.3 XX\n").unwrap();
    let noise = NoiseModel::idle_only(2e-3);
    let ideal = circuit_energy(&c, &h, None).unwrap();
    let bare = (circuit_energy(&c, &h, Some(&noise)).unwrap() - ideal).abs();
    let decoupled = (circuit_energy(&insert_dd(&c), &h, Some(&noise)).unwrap() - ideal).abs();
    assert!(decoupled < bare, "{decoupled} vs {bare}");
}

#[test]
fn richardson_recovers_polynomials_exactly() {
    let poly = |c: &[f64], x: f64| c.iter().rev().fold(0.0, |acc, k| acc * x + k);
    for coeffs in [vec![-1.5, 0.25, 0.125], vec![2.0, -1.0], vec![0.3, 0.0, -0.02, 0.001]] {
        let xs: Vec<f64> = (0..coeffs.len()).map(|k| (2 * k + 1) as f64).collect();
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, poly(&coeffs, x))).collect();
        let fit = zne_extrapolate(&pts, ExtrapolationFit::Richardson).unwrap();
        assert!((fit.value - coeffs[0]).abs() <= 1e-9);
    }
    let line: Vec<(f64, f64)> = [1.0, 3.0, 5.0].iter().map(|&x| (x, 4.0 - 0.7 * x)).collect();
    let fit = zne_extrapolate(&line, ExtrapolationFit::Linear).unwrap();
    assert!((fit.value - 4.0).abs() <= 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn inverse_undoes_circuit(c in circuit(3, 40), seed in 0u64..8) {
        let psi = apply_circuit(&StateVector::basis(3, seed), &c).unwrap();
        let back = apply_circuit(&psi, &invert(&c)).unwrap();
        let target = StateVector::basis(3, seed);
        let overlap: Complex64 = back.amplitudes().iter().zip(target.amplitudes()).map(|(a, b)| a.conj() * b).sum();
        prop_assert!((overlap.norm() - 1.0).abs() <= 1e-10);
        prop_assert!((overlap - Complex64::new(1.0, 0.0)).norm() <= 1e-9);
    }

    #[test]
    fn dd_is_structurally_idempotent(c in circuit(4, 40)) {
        let once = insert_dd(&c);
        prop_assert_eq!(schedule(&once).depth(), schedule(&c).depth());
        prop_assert_eq!(insert_dd(&once), once.clone());
        let h = wigner_core::model::PauliHamiltonian::from_text("1 ZZII\n0.5 XIXI\n-0.25 YYZZ\n").unwrap();
        let a = circuit_energy(&c, &h, None).unwrap();
        prop_assert!((circuit_energy(&once, &h, None).unwrap() - a).abs() <= 1e-10);
    }

    #[test]
    fn richardson_is_exact_on_random_polynomials(coeffs in prop::collection::vec(-5.0f64..5.0, 1..=4)) {
        let xs: Vec<f64> = (0..coeffs.len().max(2)).map(|k| (2 * k + 1) as f64).collect();
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, coeffs.iter().rev().fold(0.0, |acc, k| acc * x + k))).collect();
        let fit = zne_extrapolate(&pts, ExtrapolationFit::Richardson).unwrap();
        prop_assert!((fit.value - coeffs[0]).abs() <= 1e-9 * (1.0 + coeffs.iter().map(|c| c.abs()).sum::<f64>()));
    }
}
