use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_ansatz, cobyla_minimize, AnsatzKind, AnsatzSpec, OptimizerConfig};
use crate::circuit::{circuit_energy, NoiseModel};
use crate::exact::diagonal_minimum;
use crate::mitigation::{mitigated_energy, MitigatedEstimate, MitigationConfig};
use crate::model::{build_pauli_hamiltonian, build_sector_hamiltonian, number_penalty, PauliHamiltonian, RingConfig};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct VqeResult {
    pub parameters: Vec<f64>,
    pub energy: f64,
    pub history: Vec<(usize, f64)>,
    pub evaluations: usize,
    pub converged: bool,
}

impl VqeResult {
    /// `key = value` per line.
    pub fn to_record(&self) -> String {
        let params: Vec<String> = self.parameters.iter().map(|p| p.to_string()).collect();
        let mut out = String::new();
        writeln!(out, "energy = {}", self.energy).unwrap();
        writeln!(out, "converged = {}", self.converged).unwrap();
        writeln!(out, "evaluations = {}", self.evaluations).unwrap();
        writeln!(out, "parameters = {}", params.join(",")).unwrap();
        out
    }

    /// Tab-separated `(evaluation, energy)` rows for convergence plots.
    pub fn history_data(&self) -> String {
        self.history.iter().map(|(k, e)| format!("{k}\t{e}\n")).collect()
    }
}

/// The VQE cost function: energy of the ansatz state under an optional noise
/// model and mitigation stack.
///
/// The hardware-efficient ansatz does not conserve particle number, so its
/// objective adds `μ (N - Ne)^2` with `μ` from [`number_penalty_weight`]. The
/// penalised operator has the same ground state and energy as the ring
/// Hamiltonian restricted to `Ne` particles.
#[derive(Clone, Debug)]
pub struct EnergyObjective {
    hamiltonian: PauliHamiltonian,
    spec: AnsatzSpec,
    noise: Option<NoiseModel>,
    mitigation: Option<MitigationConfig>,
}

impl EnergyObjective {
    pub fn new(
        cfg: &RingConfig,
        spec: &AnsatzSpec,
        noise: Option<&NoiseModel>,
        mitigation: Option<&MitigationConfig>,
    ) -> Result<Self> {
        cfg.validate()?;
        spec.validate()?;
        if spec.qubits != cfg.sites {
            return Err(Error::domain(format!(
                "ansatz has {} qubits but the ring has {} sites",
                spec.qubits, cfg.sites
            )));
        }
        if spec.kind == AnsatzKind::NumberPreserving && spec.initial_state.count_ones() as usize != cfg.electrons {
            return Err(Error::domain(format!(
                "initial state {:#b} does not hold {} particles",
                spec.initial_state, cfg.electrons
            )));
        }
        if let Some(n) = noise {
            n.validate()?;
        }
        if let Some(m) = mitigation {
            m.validate()?;
        }
        let mut hamiltonian = build_pauli_hamiltonian(cfg)?;
        if spec.kind == AnsatzKind::HardwareEfficient {
            let penalty = number_penalty(cfg.sites, cfg.electrons, number_penalty_weight(cfg)?)?;
            hamiltonian = hamiltonian.plus(&penalty)?;
        }
        Ok(EnergyObjective {
            hamiltonian,
            spec: spec.clone(),
            noise: noise.copied(),
            mitigation: mitigation.filter(|m| m.is_active()).cloned(),
        })
    }

    /// The operator being minimised, including any number penalty.
    pub fn hamiltonian(&self) -> &PauliHamiltonian {
        &self.hamiltonian
    }

    pub fn spec(&self) -> &AnsatzSpec {
        &self.spec
    }

    /// Unmitigated energy at `params`.
    pub fn raw(&self, params: &[f64]) -> Result<f64> {
        circuit_energy(
            &build_ansatz(&self.spec, params)?,
            &self.hamiltonian,
            self.noise.as_ref(),
        )
    }

    /// Energy with `mitigation` applied, plus its diagnostics.
    pub fn mitigated(&self, params: &[f64], mitigation: &MitigationConfig) -> Result<MitigatedEstimate> {
        mitigated_energy(
            &build_ansatz(&self.spec, params)?,
            &self.hamiltonian,
            self.noise.as_ref(),
            mitigation,
        )
    }

    /// The objective the optimizer sees.
    pub fn evaluate(&self, params: &[f64]) -> Result<f64> {
        match &self.mitigation {
            Some(m) => Ok(self.mitigated(params, m)?.energy),
            None => self.raw(params),
        }
    }
}

/// Smallest penalty weight that keeps every other particle-number sector
/// above the `Ne`-particle ground energy, plus a margin of `t`.
///
/// The hopping term has norm at most `M t` and the interaction is
/// non-negative, so any sector's energy is at least `-M t`; the `Ne` ground
/// energy is at most the best classical configuration's.
pub fn number_penalty_weight(cfg: &RingConfig) -> Result<f64> {
    let classical = diagonal_minimum(&build_sector_hamiltonian(cfg)?).energy;
    Ok(classical.max(0.0) + (cfg.sites as f64 + 1.0) * cfg.hopping)
}

/// Uniform draws from `[-0.1, 0.1]`.
pub fn initial_parameters(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(-0.1..=0.1)).collect()
}

pub fn run_vqe(
    cfg: &RingConfig,
    spec: &AnsatzSpec,
    opt: &OptimizerConfig,
    noise: Option<&NoiseModel>,
    mitigation: Option<&MitigationConfig>,
) -> Result<VqeResult> {
    let x0 = initial_parameters(spec.parameter_count(), opt.seed);
    run_vqe_from(cfg, spec, opt, noise, mitigation, &x0)
}

/// [`run_vqe`] from explicit starting parameters, e.g. the optimum of a
/// neighbouring coupling.
pub fn run_vqe_from(
    cfg: &RingConfig,
    spec: &AnsatzSpec,
    opt: &OptimizerConfig,
    noise: Option<&NoiseModel>,
    mitigation: Option<&MitigationConfig>,
    x0: &[f64],
) -> Result<VqeResult> {
    let objective = EnergyObjective::new(cfg, spec, noise, mitigation)?;
    if x0.len() != spec.parameter_count() {
        return Err(Error::DimensionMismatch {
            expected: spec.parameter_count(),
            actual: x0.len(),
        });
    }
    let m = cobyla_minimize(
        |x| {
            objective
                .evaluate(x)
                .expect("parameter count and register size were checked up front")
        },
        x0,
        opt,
    )?;
    Ok(VqeResult {
        parameters: m.x,
        energy: m.f,
        history: m.history,
        evaluations: m.evaluations,
        converged: m.converged,
    })
}

/// `100 · |measured - reference| / |reference|`.
pub fn relative_error(measured: f64, reference: f64) -> Result<f64> {
    if reference == 0.0 {
        return Err(Error::domain("relative error against a zero reference"));
    }
    Ok(100.0 * (measured - reference).abs() / reference.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Statistics;

    #[test]
    fn relative_error_reproduces_table_rows() {
        assert!((relative_error(-6.12, -6.85).unwrap() - 10.65).abs() <= 0.01);
        assert!((relative_error(-78.85, -84.05).unwrap() - 6.19).abs() <= 0.01);
        assert_eq!(relative_error(-3.0, -3.0).unwrap(), 0.0);
        assert!(relative_error(1.0, 0.0).is_err());
    }

    #[test]
    fn initial_parameters_are_small_and_seeded() {
        let a = initial_parameters(18, 5);
        assert_eq!(a, initial_parameters(18, 5));
        assert_ne!(a, initial_parameters(18, 6));
        assert!(a.iter().all(|x| x.abs() <= 0.1));
    }

    #[test]
    fn objective_checks_compatibility() {
        let cfg = RingConfig::new(6, 2, 45.0, Statistics::HardcoreBoson).unwrap();
        let three = AnsatzSpec {
            kind: AnsatzKind::NumberPreserving,
            layers: 1,
            qubits: 6,
            initial_state: 0b000111,
        };
        assert!(EnergyObjective::new(&cfg, &three, None, None).is_err());
        let small = AnsatzSpec {
            qubits: 4,
            initial_state: 0b0101,
            ..three
        };
        assert!(EnergyObjective::new(&cfg, &small, None, None).is_err());
    }

    #[test]
    fn record_format() {
        let r = VqeResult {
            parameters: vec![0.5, -1.0],
            energy: -2.25,
            history: vec![(0, -1.0), (1, -2.25)],
            evaluations: 2,
            converged: true,
        };
        assert_eq!(
            r.to_record(),
            "energy = -2.25\nconverged = true\nevaluations = 2\nparameters = 0.5,-1\n"
        );
        assert_eq!(r.history_data(), "0\t-1\n1\t-2.25\n");
    }
}
