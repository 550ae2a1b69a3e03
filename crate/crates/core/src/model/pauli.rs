use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{build_interaction_matrix, RingConfig, Statistics};
use crate::numfmt::significant;
use crate::{Error, Result};

/// Tensor product of single-qubit Paulis, stored as X and Z bit masks.
///
/// Character `k` of the axes string acts on qubit `k`. A qubit with both its
/// X and Z bits set carries `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(qubits: usize) -> Self {
        PauliString { qubits, x: 0, z: 0 }
    }

    /// Sets `axis` (one of `I`, `X`, `Y`, `Z`) on `qubit`.
    pub fn with(mut self, qubit: usize, axis: char) -> Self {
        let bit = 1u64 << qubit;
        self.x &= !bit;
        self.z &= !bit;
        match axis {
            'X' => self.x |= bit,
            'Y' => {
                self.x |= bit;
                self.z |= bit;
            }
            'Z' => self.z |= bit,
            _ => {}
        }
        self
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Only `I` and `Z` factors.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn axis(&self, qubit: usize) -> char {
        match (self.x >> qubit & 1, self.z >> qubit & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (1, 1) => 'Y',
            _ => 'Z',
        }
    }

    pub fn axes(&self) -> String {
        (0..self.qubits).map(|q| self.axis(q)).collect()
    }

    /// `P|b> = phase · |b ^ x_mask>`; returns the phase.
    ///
    /// With `Y = i·X·Z`, the phase is `i^{#Y} · (-1)^{popcount(b & z_mask)}`.
    pub fn phase(&self, basis_state: u64) -> Complex64 {
        let ys = (self.x & self.z).count_ones();
        let sign = if (basis_state & self.z).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        match ys % 4 {
            0 => Complex64::new(sign, 0.0),
            1 => Complex64::new(0.0, sign),
            2 => Complex64::new(-sign, 0.0),
            _ => Complex64::new(0.0, -sign),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.axes())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 64 {
            return Err(Error::domain(format!(
                "axes string of length {} not supported",
                s.len()
            )));
        }
        let mut p = PauliString::identity(s.len());
        for (q, c) in s.chars().enumerate() {
            if !matches!(c, 'I' | 'X' | 'Y' | 'Z') {
                return Err(Error::domain(format!("invalid Pauli axis {c:?}")));
            }
            p = p.with(q, c);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn axes(&self) -> String {
        self.string.axes()
    }
}

/// Real-weighted sum of Pauli strings, one term per distinct string, ordered
/// lexicographically by axes string.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliHamiltonian {
    qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliHamiltonian {
    /// Merges terms sharing a string and drops those whose coefficients
    /// cancel to exactly zero.
    pub fn from_terms(qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut merged: BTreeMap<String, (f64, PauliString)> = BTreeMap::new();
        for (coefficient, string) in terms {
            if string.qubits() != qubits {
                return Err(Error::DimensionMismatch {
                    expected: qubits,
                    actual: string.qubits(),
                });
            }
            if !coefficient.is_finite() {
                return Err(Error::domain(format!("non-finite coefficient on {string}")));
            }
            merged.entry(string.axes()).or_insert((0.0, string)).0 += coefficient;
        }
        let terms = merged
            .into_values()
            .filter(|(c, _)| *c != 0.0)
            .map(|(coefficient, string)| PauliTerm { coefficient, string })
            .collect();
        Ok(PauliHamiltonian { qubits, terms })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn identity_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .find(|t| t.string.is_identity())
            .map_or(0.0, |t| t.coefficient)
    }

    /// Matrix element `<row| H |col>` in the computational basis.
    pub fn element(&self, row: u64, col: u64) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| col ^ t.string.x_mask() == row)
            .map(|t| t.string.phase(col) * t.coefficient)
            .sum()
    }

    /// Full `2^q × 2^q` operator, row-major.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let dim = 1usize << self.qubits;
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for term in &self.terms {
            for col in 0..dim {
                let row = col ^ term.string.x_mask() as usize;
                out[row * dim + col] += term.string.phase(col as u64) * term.coefficient;
            }
        }
        out
    }

    /// Restriction to the span of `basis`, row-major. Fails if any restricted
    /// element has an imaginary part above `1e-12`.
    pub fn project(&self, basis: &[u64]) -> Result<Vec<f64>> {
        let n = basis.len();
        let mut out = vec![0.0; n * n];
        for (r, &row) in basis.iter().enumerate() {
            for (c, &col) in basis.iter().enumerate() {
                let z = self.element(row, col);
                if z.im.abs() > 1e-12 {
                    return Err(Error::domain(format!("complex element {z} at ({row:#b}, {col:#b})")));
                }
                out[r * n + c] = z.re;
            }
        }
        Ok(out)
    }

    /// Term-wise sum of two operators on the same register.
    pub fn plus(&self, other: &PauliHamiltonian) -> Result<Self> {
        let terms = self.terms.iter().chain(&other.terms).map(|t| (t.coefficient, t.string));
        Self::from_terms(self.qubits, terms)
    }

    /// `<coefficient> <axes>` per line, coefficient to 12 significant digits.
    pub fn to_text(&self) -> String {
        self.terms
            .iter()
            .map(|t| format!("{} {}\n", significant(t.coefficient, 12), t.string))
            .collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut qubits = None;
        let mut terms = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: k + 1, message };
            let (coef, axes) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| parse_err("expected `<coefficient> <axes>`".into()))?;
            let coefficient: f64 = coef.parse().map_err(|e| parse_err(format!("{e}")))?;
            let string: PauliString = axes.trim().parse().map_err(|e: Error| parse_err(e.to_string()))?;
            if *qubits.get_or_insert(string.qubits()) != string.qubits() {
                return Err(parse_err("axes strings differ in length".into()));
            }
            terms.push((coefficient, string));
        }
        let qubits = qubits.ok_or(Error::Parse {
            line: 0,
            message: "no terms".into(),
        })?;
        Self::from_terms(qubits, terms)
    }
}

/// Maps the ring Hamiltonian onto one qubit per site.
///
/// `n_i -> (I - Z_i)/2`, so each Coulomb pair contributes
/// `V_ij (I - Z_i - Z_j + Z_i Z_j) / 4`. A hop on edge `(i, j)` becomes
/// `-(t/2)(X_i X_j + Y_i Y_j)`. Under Jordan–Wigner with site-ordered strings
/// the boundary edge `(M-1, 0)` additionally carries `Z_1 ... Z_{M-2}`.
pub fn build_pauli_hamiltonian(cfg: &RingConfig) -> Result<PauliHamiltonian> {
    let v = build_interaction_matrix(cfg)?;
    let m = cfg.sites;
    let id = PauliString::identity(m);
    let mut terms = Vec::new();

    for i in 0..m {
        for j in i + 1..m {
            let q = v.get(i, j) / 4.0;
            if q == 0.0 {
                continue;
            }
            terms.push((q, id));
            terms.push((-q, id.with(i, 'Z')));
            terms.push((-q, id.with(j, 'Z')));
            terms.push((q, id.with(i, 'Z').with(j, 'Z')));
        }
    }

    let half_t = cfg.hopping / 2.0;
    for (i, j) in cfg.edges() {
        let mut string = id;
        if cfg.statistics == Statistics::SpinlessFermion && j < i {
            for k in j + 1..i {
                string = string.with(k, 'Z');
            }
        }
        terms.push((-half_t, string.with(i, 'X').with(j, 'X')));
        terms.push((-half_t, string.with(i, 'Y').with(j, 'Y')));
    }
    PauliHamiltonian::from_terms(m, terms)
}

/// `weight · (N - target)^2` with `N = Σ (I - Z_i)/2`.
///
/// Writing `N - target = c - ΣZ_i/2` with `c = qubits/2 - target` gives
/// `c² - cΣZ_i + (qubits + 2Σ_{i<j} Z_i Z_j)/4`.
pub fn number_penalty(qubits: usize, target: usize, weight: f64) -> Result<PauliHamiltonian> {
    if target > qubits || !(weight >= 0.0) {
        return Err(Error::domain(format!(
            "number penalty needs 0 <= target <= {qubits} and weight >= 0, got {target} and {weight}"
        )));
    }
    let id = PauliString::identity(qubits);
    let c = qubits as f64 / 2.0 - target as f64;
    let mut terms = vec![(weight * (c * c + qubits as f64 / 4.0), id)];
    for i in 0..qubits {
        terms.push((-weight * c, id.with(i, 'Z')));
        for j in i + 1..qubits {
            terms.push((weight / 2.0, id.with(i, 'Z').with(j, 'Z')));
        }
    }
    PauliHamiltonian::from_terms(qubits, terms)
}
