use proptest::prelude::*;
use wigner_core::circuit::{apply_circuit, circuit_energy, Circuit, StateVector};
use wigner_core::exact::ground_state;
use wigner_core::model::*;
use wigner_core::vqe::*;

fn ring(u: f64) -> RingConfig {
    RingConfig::new(6, 2, u, Statistics::HardcoreBoson).unwrap()
}

fn exact(cfg: &RingConfig) -> f64 {
    ground_state(&build_sector_hamiltonian(cfg).unwrap()).unwrap().energy
}

fn np_spec(initial_state: u64) -> AnsatzSpec {
    AnsatzSpec {
        kind: AnsatzKind::NumberPreserving,
        layers: 3,
        qubits: 6,
        initial_state,
    }
}

fn rotate(mask: u64, by: usize) -> u64 {
    ((mask << by) | (mask >> (6 - by))) & 0b111111
}

#[test]
fn noiseless_vqe_reaches_exact_energy_at_weak_coupling() {
    let cfg = ring(5.0);
    let spec = AnsatzSpec::for_ring(&cfg, AnsatzKind::NumberPreserving, 3).unwrap();
    let r = run_vqe(&cfg, &spec, &OptimizerConfig::default(), None, None).unwrap();
    assert!((r.energy - exact(&cfg)).abs() <= 1e-4, "{}", r.energy - exact(&cfg));
    assert!(r.converged && r.evaluations <= 5000);
}

#[test]
fn warm_started_sweep_tracks_the_ground_state() {
    let template = ring(5.0);
    let spec = AnsatzSpec::for_ring(&template, AnsatzKind::NumberPreserving, 3).unwrap();
    let mut x = initial_parameters(spec.parameter_count(), 1);
    for u in [5.0, 10.0, 15.0, 20.0] {
        let cfg = template.with_interaction(u);
        let r = run_vqe_from(&cfg, &spec, &OptimizerConfig::default(), None, None, &x).unwrap();
        assert!(relative_error(r.energy, exact(&cfg)).unwrap() <= 0.01, "U={u}");
        x = r.parameters;
    }
}

#[test]
fn variational_bound_holds_for_both_ansatze() {
    let cfg = ring(45.0);
    let e0 = exact(&cfg);
    let opt = OptimizerConfig {
        max_evaluations: 600,
        ..OptimizerConfig::default()
    };
    for kind in [AnsatzKind::NumberPreserving, AnsatzKind::HardwareEfficient] {
        let spec = AnsatzSpec::for_ring(&cfg, kind, 2).unwrap();
        for seed in 0..5 {
            let r = run_vqe(&cfg, &spec, &OptimizerConfig { seed, ..opt.clone() }, None, None).unwrap();
            assert!(r.energy >= e0 - 1e-9, "{kind:?} seed {seed}: {}", r.energy - e0);
        }
    }
}

#[test]
fn penalised_objective_has_the_sector_ground_energy() {
    // Dense check: the penalised operator's global minimum over all 64 basis
    // sectors is the two-particle ground energy.
    let cfg = ring(45.0);
    let h = build_pauli_hamiltonian(&cfg)
        .unwrap()
        .plus(&number_penalty(6, 2, number_penalty_weight(&cfg).unwrap()).unwrap())
        .unwrap();
    let mut lowest = f64::INFINITY;
    for ne in 0..=6 {
        let basis: Vec<u64> = (0..64u64).filter(|b| b.count_ones() == ne).collect();
        let n = basis.len();
        let m = h.project(&basis).unwrap();
        let (values, _) = wigner_core::exact::jacobi_eigen(&m, n).unwrap();
        let e = values.iter().copied().fold(f64::INFINITY, f64::min);
        if ne != 2 {
            assert!(e > exact(&cfg), "sector {ne}");
        }
        lowest = lowest.min(e);
    }
    assert!((lowest - exact(&cfg)).abs() <= 1e-9);
}

#[test]
fn runs_are_reproducible() {
    let cfg = ring(20.0);
    let spec = AnsatzSpec::for_ring(&cfg, AnsatzKind::NumberPreserving, 2).unwrap();
    let opt = OptimizerConfig {
        max_evaluations: 300,
        seed: 9,
        ..OptimizerConfig::default()
    };
    let noise = wigner_core::circuit::NoiseModel::default();
    let a = run_vqe(&cfg, &spec, &opt, Some(&noise), None).unwrap();
    let b = run_vqe(&cfg, &spec, &opt, Some(&noise), None).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_record(), b.to_record());
}

#[test]
fn translating_the_whole_circuit_leaves_the_energy_unchanged() {
    let h = build_pauli_hamiltonian(&ring(45.0)).unwrap();
    let params: Vec<f64> = (0..18).map(|k| 0.37 * k as f64 - 2.0).collect();
    let c = build_ansatz(&np_spec(0b001001), &params).unwrap();
    let e = circuit_energy(&c, &h, None).unwrap();
    for by in 1..6 {
        let moved: Vec<_> = c.gates().iter().map(|g| g.relabel(|q| (q + by) % 6)).collect();
        let moved = Circuit::from_gates(6, moved).unwrap();
        assert!((circuit_energy(&moved, &h, None).unwrap() - e).abs() <= 1e-10);
    }
}

#[test]
fn two_site_cycle_of_start_and_parameters_is_a_symmetry() {
    // Shifting by two sites maps even edges to even edges, so the layer
    // structure is unchanged; only the start state and angles move.
    let h = build_pauli_hamiltonian(&ring(45.0)).unwrap();
    let params: Vec<f64> = (0..18).map(|k| (k as f64 * 1.3).sin()).collect();
    let e = circuit_energy(&build_ansatz(&np_spec(0b001001), &params).unwrap(), &h, None).unwrap();
    let shifted: Vec<f64> = params
        .chunks(6)
        .flat_map(|layer| (0..6).map(move |e| layer[(e + 4) % 6]))
        .collect();
    let c = build_ansatz(&np_spec(rotate(0b001001, 2)), &shifted).unwrap();
    assert!((circuit_energy(&c, &h, None).unwrap() - e).abs() <= 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn number_preserving_ansatz_conserves_particles(
        params in prop::collection::vec(-7.0f64..7.0, 18),
        start in prop::sample::select(vec![0b000011u64, 0b001001, 0b010101, 0b111000, 0b000001]),
    ) {
        let c = build_ansatz(&np_spec(start), &params).unwrap();
        let out = apply_circuit(&StateVector::new(6), &c).unwrap();
        prop_assert!((out.mean_excitations() - start.count_ones() as f64).abs() <= 1e-10);
    }

    #[test]
    fn optimizer_never_returns_worse_than_start(
        centre in prop::collection::vec(-3.0f64..3.0, 1..6),
        x0 in prop::collection::vec(-3.0f64..3.0, 6),
        budget in 2usize..60,
    ) {
        let x0 = &x0[..centre.len()];
        let f = |x: &[f64]| x.iter().zip(&centre).map(|(a, c)| (a - c).powi(2) * (1.0 + c.abs())).sum::<f64>()
            + (3.0 * x[0]).sin();
        let m = cobyla_minimize(f, x0, &OptimizerConfig { max_evaluations: budget.max(centre.len() + 2), ..OptimizerConfig::default() }).unwrap();
        prop_assert!(m.f <= f(x0));
        prop_assert_eq!(m.f, f(&m.x));
        prop_assert!(m.history.iter().all(|&(_, v)| v >= m.f));
    }
}
