use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gate::{GateMatrix, Matrix2, Matrix4};
use super::{Circuit, Gate};
use crate::model::{PauliHamiltonian, PauliString};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Anything an observable can be measured on.
pub trait QuantumState {
    fn qubits(&self) -> usize;

    /// Exact `<P>`.
    fn pauli_expectation(&self, p: &PauliString) -> f64;

    /// Computational-basis outcome probabilities after rotating every
    /// non-identity factor of `p` onto the Z axis.
    fn measurement_probabilities(&self, p: &PauliString) -> Vec<f64>;
}

/// Basis change that maps each factor of `p` onto Z: `H` for X and
/// `RX(π/2)` for Y, since `RX(π/2)† Z RX(π/2) = Y`.
fn measurement_rotation(p: &PauliString) -> Vec<Gate> {
    (0..p.qubits())
        .filter_map(|q| match p.axis(q) {
            'X' => Some(Gate::H(q)),
            'Y' => Some(Gate::Rx(q, std::f64::consts::FRAC_PI_2)),
            _ => None,
        })
        .collect()
}

fn apply_1q(amps: &mut [Complex64], bit: usize, m: &Matrix2) {
    let stride = 1usize << bit;
    for base in (0..amps.len()).step_by(2 * stride) {
        for i0 in base..base + stride {
            let i1 = i0 + stride;
            let (a, b) = (amps[i0], amps[i1]);
            amps[i0] = m[0][0] * a + m[0][1] * b;
            amps[i1] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn apply_2q(amps: &mut [Complex64], bit_a: usize, bit_b: usize, m: &Matrix4) {
    let (ma, mb) = (1usize << bit_a, 1usize << bit_b);
    for i in 0..amps.len() {
        if i & (ma | mb) != 0 {
            continue;
        }
        let idx = [i, i | ma, i | mb, i | ma | mb];
        let v = idx.map(|k| amps[k]);
        for (r, &k) in idx.iter().enumerate() {
            amps[k] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
}

/// Applies `gate` to a flat vector, offsetting every target bit by `shift`
/// and optionally using the complex-conjugate matrix.
fn apply_gate_shifted(amps: &mut [Complex64], gate: &Gate, shift: usize, conjugate: bool) {
    let t = gate.targets();
    match gate.matrix() {
        GateMatrix::One(mut m) => {
            if conjugate {
                m.iter_mut().flatten().for_each(|z| *z = z.conj());
            }
            apply_1q(amps, t[0] + shift, &m);
        }
        GateMatrix::Two(mut m) => {
            if conjugate {
                m.iter_mut().flatten().for_each(|z| *z = z.conj());
            }
            apply_2q(amps, t[0] + shift, t[1] + shift, &m);
        }
    }
}

/// Pure state on `qubits` qubits; qubit 0 is the least-significant index bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn new(qubits: usize) -> Self {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: u64) -> Self {
        let mut amplitudes = vec![ZERO; 1 << qubits];
        amplitudes[index as usize] = Complex64::new(1.0, 0.0);
        StateVector { qubits, amplitudes }
    }

    pub fn from_amplitudes(qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << qubits,
                actual: amplitudes.len(),
            });
        }
        let s = StateVector { qubits, amplitudes };
        if (s.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::domain(format!("state norm {} is not 1", s.norm())));
        }
        Ok(s)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.qubits)?;
        apply_gate_shifted(&mut self.amplitudes, gate, 0, false);
        Ok(())
    }

    /// `sum_k |a_k|^2 · popcount(k)`, the mean excitation number.
    pub fn mean_excitations(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm_sqr() * k.count_ones() as f64)
            .sum()
    }
}

impl QuantumState for StateVector {
    fn qubits(&self) -> usize {
        self.qubits
    }

    fn pauli_expectation(&self, p: &PauliString) -> f64 {
        let x = p.x_mask() as usize;
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(c, a)| (self.amplitudes[c ^ x].conj() * p.phase(c as u64) * a).re)
            .sum()
    }

    fn measurement_probabilities(&self, p: &PauliString) -> Vec<f64> {
        let mut rotated = self.clone();
        for g in measurement_rotation(p) {
            apply_gate_shifted(&mut rotated.amplitudes, &g, 0, false);
        }
        rotated.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Mixed state, stored as a flat `dim × dim` row-major array so that the
/// row index occupies bits `qubits..2·qubits` of the flat index and the
/// column index bits `0..qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    rho: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        let mut rho = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                rho[r * dim + c] = a[r] * a[c].conj();
            }
        }
        DensityMatrix {
            qubits: state.qubits,
            rho,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.rho[row * self.dim() + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.rho
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|k| self.get(k, k)).sum()
    }

    /// Largest `|rho_rc - conj(rho_cr)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// `rho -> U rho U†`.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.qubits)?;
        apply_gate_shifted(&mut self.rho, gate, self.qubits, false);
        apply_gate_shifted(&mut self.rho, gate, 0, true);
        Ok(())
    }

    /// `rho -> (1-p) rho + p · (I_S / d_S) ⊗ Tr_S(rho)` for the subsystem `S`
    /// spanned by `targets`.
    pub fn depolarize(&mut self, targets: &[usize], p: f64) {
        if p == 0.0 {
            return;
        }
        let d = 1usize << targets.len();
        let patterns: Vec<usize> = (0..d)
            .map(|t| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| t >> k & 1 == 1)
                    .fold(0, |acc, (_, &q)| acc | 1 << q)
            })
            .collect();
        let smask = patterns[d - 1];
        let dim = self.dim();
        let old = self.rho.clone();
        for r in 0..dim {
            for c in 0..dim {
                let k = r * dim + c;
                self.rho[k] = old[k] * (1.0 - p);
                if r & smask == c & smask {
                    let (re, ce) = (r & !smask, c & !smask);
                    let traced: Complex64 = patterns.iter().map(|&t| old[(re | t) * dim + (ce | t)]).sum();
                    self.rho[k] += traced * (p / d as f64);
                }
            }
        }
    }

    /// `rho -> (1-p) rho + p Z rho Z` on `qubit`: coherences between
    /// different values of that bit shrink by `1 - 2p`.
    pub fn phase_flip(&mut self, qubit: usize, p: f64) {
        if p == 0.0 {
            return;
        }
        let dim = self.dim();
        let factor = 1.0 - 2.0 * p;
        for r in 0..dim {
            for c in 0..dim {
                if (r ^ c) >> qubit & 1 == 1 {
                    self.rho[r * dim + c] *= factor;
                }
            }
        }
    }
}

impl QuantumState for DensityMatrix {
    fn qubits(&self) -> usize {
        self.qubits
    }

    // Tr(rho P) = sum_c rho[c][c ^ x] · phase(c)
    fn pauli_expectation(&self, p: &PauliString) -> f64 {
        let x = p.x_mask() as usize;
        (0..self.dim())
            .map(|c| (self.get(c, c ^ x) * p.phase(c as u64)).re)
            .sum()
    }

    fn measurement_probabilities(&self, p: &PauliString) -> Vec<f64> {
        let mut rotated = self.clone();
        for g in measurement_rotation(p) {
            rotated
                .apply_gate(&g)
                .expect("rotation targets lie inside the register");
        }
        (0..rotated.dim()).map(|k| rotated.get(k, k).re.max(0.0)).collect()
    }
}

pub fn apply_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    if state.qubits != circuit.qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.qubits(),
            actual: state.qubits,
        });
    }
    let mut out = state.clone();
    for g in circuit.gates() {
        apply_gate_shifted(&mut out.amplitudes, g, 0, false);
    }
    Ok(out)
}

/// Exact `sum_k c_k <P_k>`.
pub fn expectation<S: QuantumState>(state: &S, h: &PauliHamiltonian) -> Result<f64> {
    if state.qubits() != h.qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.qubits(),
            actual: state.qubits(),
        });
    }
    Ok(h.terms()
        .iter()
        .map(|t| t.coefficient * state.pauli_expectation(&t.string))
        .sum())
}

/// Shot-sampled estimate of `<H>`: each non-identity term is measured
/// `shots` times in its own rotated basis. Terms are sampled in order from a
/// single ChaCha8 stream seeded with `seed`.
pub fn sample_expectation<S: QuantumState>(state: &S, h: &PauliHamiltonian, shots: usize, seed: u64) -> Result<f64> {
    if shots == 0 {
        return Err(Error::domain("shots must be at least 1"));
    }
    if state.qubits() != h.qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.qubits(),
            actual: state.qubits(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for term in h.terms() {
        if term.string.is_identity() {
            total += term.coefficient;
            continue;
        }
        let support = (term.string.x_mask() | term.string.z_mask()) as usize;
        let probabilities = state.measurement_probabilities(&term.string);
        let outcomes =
            WeightedIndex::new(&probabilities).map_err(|e| Error::domain(format!("bad distribution: {e}")))?;
        let mut sum = 0i64;
        for _ in 0..shots {
            let b = outcomes.sample(&mut rng);
            sum += if (b & support).count_ones() % 2 == 0 { 1 } else { -1 };
        }
        total += term.coefficient * sum as f64 / shots as f64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn z0(qubits: usize) -> PauliHamiltonian {
        PauliHamiltonian::from_terms(qubits, [(1.0, PauliString::identity(qubits).with(0, 'Z'))]).unwrap()
    }

    #[test]
    fn basic_gate_actions() {
        let c = Circuit::from_gates(3, vec![Gate::X(0)]).unwrap();
        let out = apply_circuit(&StateVector::new(3), &c).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[1].re, 1.0);

        let c = Circuit::from_gates(2, vec![Gate::Cz(0, 1)]).unwrap();
        let out = apply_circuit(&StateVector::basis(2, 0b11), &c).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[3].re, -1.0);

        let c = Circuit::from_gates(2, vec![Gate::Cnot(0, 1)]).unwrap();
        let out = apply_circuit(&StateVector::basis(2, 0b01), &c).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[3].re, 1.0);
    }

    #[test]
    fn xx_plus_yy_pi_swaps_excitation() {
        let c = Circuit::from_gates(2, vec![Gate::XxPlusYy(0, 1, std::f64::consts::PI)]).unwrap();
        let out = apply_circuit(&StateVector::basis(2, 0b01), &c).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0b10].norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.amplitudes()[0b01].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn expectation_basics() {
        assert_abs_diff_eq!(expectation(&StateVector::new(1), &z0(1)).unwrap(), 1.0);
        let id = PauliHamiltonian::from_terms(2, [(2.5, PauliString::identity(2))]).unwrap();
        assert_abs_diff_eq!(expectation(&StateVector::basis(2, 3), &id).unwrap(), 2.5);
        assert!(expectation(&StateVector::new(2), &z0(1)).is_err());
    }

    #[test]
    fn density_matches_pure_expectations() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::H(0),
                Gate::Ry(1, 0.7),
                Gate::XxPlusYy(0, 2, 1.1),
                Gate::Cnot(1, 0),
                Gate::Rx(2, -0.4),
            ],
        )
        .unwrap();
        let psi = apply_circuit(&StateVector::new(3), &c).unwrap();
        let mut rho = DensityMatrix::from_pure(&StateVector::new(3));
        for g in c.gates() {
            rho.apply_gate(g).unwrap();
        }
        for axes in ["XYZ", "ZZI", "YIX", "IXX"] {
            let p: PauliString = axes.parse().unwrap();
            assert_abs_diff_eq!(psi.pauli_expectation(&p), rho.pauli_expectation(&p), epsilon = 1e-12);
        }
    }

    #[test]
    fn depolarize_then_flip_single_qubit() {
        let mut rho = DensityMatrix::from_pure(&StateVector::new(1));
        rho.apply_gate(&Gate::X(0)).unwrap();
        rho.depolarize(&[0], 0.1);
        assert_abs_diff_eq!(expectation(&rho, &z0(1)).unwrap(), -0.9, epsilon = 1e-12);
    }

    #[test]
    fn two_qubit_depolarizing_fully_mixes_subsystem() {
        let mut rho = DensityMatrix::from_pure(&StateVector::basis(3, 0b011));
        rho.depolarize(&[0, 1], 1.0);
        for k in 0..8 {
            let expected = if k & 0b100 == 0 { 0.25 } else { 0.0 };
            assert_abs_diff_eq!(rho.get(k, k).re, expected, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sampling_is_seeded_and_exact_on_eigenstates() {
        let h = z0(2);
        let s = StateVector::basis(2, 0b10);
        assert_eq!(sample_expectation(&s, &h, 1, 7).unwrap(), 1.0);
        let mut plus = StateVector::new(2);
        plus.apply_gate(&Gate::H(0)).unwrap();
        let a = sample_expectation(&plus, &h, 1000, 42).unwrap();
        let b = sample_expectation(&plus, &h, 1000, 42).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(sample_expectation(&plus, &h, 0, 1).is_err());
    }

    #[test]
    fn y_measurement_rotation() {
        // RX(-π/2)|0> is the +1 eigenstate of Y.
        let mut s = StateVector::new(1);
        s.apply_gate(&Gate::Rx(0, -std::f64::consts::FRAC_PI_2)).unwrap();
        let y: PauliString = "Y".parse().unwrap();
        assert_abs_diff_eq!(s.pauli_expectation(&y), 1.0, epsilon = 1e-12);
        let h = PauliHamiltonian::from_terms(1, [(1.0, y)]).unwrap();
        assert_abs_diff_eq!(sample_expectation(&s, &h, 50, 3).unwrap(), 1.0, epsilon = 1e-12);
    }
}
