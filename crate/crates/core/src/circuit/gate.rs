use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_complex::Complex64;

use crate::{Error, Result};

/// Gates of the simulator. Rotations carry their angle in radians after the
/// qubit indices.
///
/// `XxPlusYy(a, b, θ)` is `exp(-iθ/2 · (X_a X_b + Y_a Y_b)/2)`; it rotates
/// within `{|01>, |10>}` and leaves `|00>`, `|11>` alone, so it conserves
/// excitation number. `Cnot(control, target)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    X(usize),
    Y(usize),
    Z(usize),
    H(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Cz(usize, usize),
    Cnot(usize, usize),
    XxPlusYy(usize, usize, f64),
}

/// The one or two qubits a gate acts on, in gate-argument order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Targets {
    qubits: [usize; 2],
    len: usize,
}

impl Deref for Targets {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.qubits[..self.len]
    }
}

pub(crate) type Matrix2 = [[Complex64; 2]; 2];
/// Local index is `bit(first target) | bit(second target) << 1`.
pub(crate) type Matrix4 = [[Complex64; 4]; 4];

pub(crate) enum GateMatrix {
    One(Matrix2),
    Two(Matrix4),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

impl Gate {
    pub fn targets(&self) -> Targets {
        use Gate::*;
        match *self {
            X(q) | Y(q) | Z(q) | H(q) | Rx(q, _) | Ry(q, _) | Rz(q, _) => Targets { qubits: [q, 0], len: 1 },
            Cz(a, b) | Cnot(a, b) | XxPlusYy(a, b, _) => Targets { qubits: [a, b], len: 2 },
        }
    }

    pub fn arity(&self) -> usize {
        self.targets().len()
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, t) | Gate::Ry(_, t) | Gate::Rz(_, t) | Gate::XxPlusYy(_, _, t) => Some(t),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        use Gate::*;
        match self {
            X(_) => "X",
            Y(_) => "Y",
            Z(_) => "Z",
            H(_) => "H",
            Rx(..) => "RX",
            Ry(..) => "RY",
            Rz(..) => "RZ",
            Cz(..) => "CZ",
            Cnot(..) => "CNOT",
            XxPlusYy(..) => "XXPLUSYY",
        }
    }

    pub fn validate(&self, qubits: usize) -> Result<()> {
        let t = self.targets();
        if let Some(&q) = t.iter().find(|&&q| q >= qubits) {
            return Err(Error::domain(format!(
                "{} targets qubit {q} on a {qubits}-qubit register",
                self.name()
            )));
        }
        if t.len() == 2 && t[0] == t[1] {
            return Err(Error::domain(format!(
                "{} needs distinct targets, got {} twice",
                self.name(),
                t[0]
            )));
        }
        if matches!(self.angle(), Some(a) if !a.is_finite()) {
            return Err(Error::domain(format!("{} has a non-finite angle", self.name())));
        }
        Ok(())
    }

    /// The inverse gate: rotations negate their angle, the rest are
    /// self-inverse.
    pub fn inverse(&self) -> Gate {
        use Gate::*;
        match *self {
            Rx(q, t) => Rx(q, -t),
            Ry(q, t) => Ry(q, -t),
            Rz(q, t) => Rz(q, -t),
            XxPlusYy(a, b, t) => XxPlusYy(a, b, -t),
            g => g,
        }
    }

    /// Same gate acting on `map(q)` for every target.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Gate {
        use Gate::*;
        match *self {
            X(q) => X(map(q)),
            Y(q) => Y(map(q)),
            Z(q) => Z(map(q)),
            H(q) => H(map(q)),
            Rx(q, t) => Rx(map(q), t),
            Ry(q, t) => Ry(map(q), t),
            Rz(q, t) => Rz(map(q), t),
            Cz(a, b) => Cz(map(a), map(b)),
            Cnot(a, b) => Cnot(map(a), map(b)),
            XxPlusYy(a, b, t) => XxPlusYy(map(a), map(b), t),
        }
    }

    pub(crate) fn matrix(&self) -> GateMatrix {
        use Gate::*;
        let c = |re: f64| Complex64::new(re, 0.0);
        match *self {
            X(_) => GateMatrix::One([[ZERO, ONE], [ONE, ZERO]]),
            Y(_) => GateMatrix::One([[ZERO, -I], [I, ZERO]]),
            Z(_) => GateMatrix::One([[ONE, ZERO], [ZERO, -ONE]]),
            H(_) => {
                let h = c(std::f64::consts::FRAC_1_SQRT_2);
                GateMatrix::One([[h, h], [h, -h]])
            }
            Rx(_, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                GateMatrix::One([[c(co), -I * s], [-I * s, c(co)]])
            }
            Ry(_, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                GateMatrix::One([[c(co), c(-s)], [c(s), c(co)]])
            }
            Rz(_, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                GateMatrix::One([[Complex64::new(co, -s), ZERO], [ZERO, Complex64::new(co, s)]])
            }
            Cz(..) => GateMatrix::Two([
                [ONE, ZERO, ZERO, ZERO],
                [ZERO, ONE, ZERO, ZERO],
                [ZERO, ZERO, ONE, ZERO],
                [ZERO, ZERO, ZERO, -ONE],
            ]),
            // Control is local bit 0: |c=1, t=0> (index 1) <-> |c=1, t=1> (index 3).
            Cnot(..) => GateMatrix::Two([
                [ONE, ZERO, ZERO, ZERO],
                [ZERO, ZERO, ZERO, ONE],
                [ZERO, ZERO, ONE, ZERO],
                [ZERO, ONE, ZERO, ZERO],
            ]),
            // (XX + YY)/2 swaps |01> and |10>, so the exponential is a rotation
            // by θ/2 about that swap.
            XxPlusYy(_, _, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                GateMatrix::Two([
                    [ONE, ZERO, ZERO, ZERO],
                    [ZERO, c(co), -I * s, ZERO],
                    [ZERO, -I * s, c(co), ZERO],
                    [ZERO, ZERO, ZERO, ONE],
                ])
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if let Some(a) = self.angle() {
            write!(f, " {a}")?;
        }
        for q in self.targets().iter() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fields = s.split_whitespace();
        let kind = fields
            .next()
            .ok_or_else(|| Error::domain("empty gate"))?
            .to_ascii_uppercase();
        let rest: Vec<&str> = fields.collect();
        let (rotation, arity) = match kind.as_str() {
            "X" | "Y" | "Z" | "H" => (false, 1),
            "RX" | "RY" | "RZ" => (true, 1),
            "CZ" | "CNOT" => (false, 2),
            "XXPLUSYY" => (true, 2),
            other => return Err(Error::domain(format!("unknown gate kind {other:?}"))),
        };
        let expected = arity + usize::from(rotation);
        if rest.len() != expected {
            return Err(Error::domain(format!(
                "{kind} takes {expected} arguments, got {}",
                rest.len()
            )));
        }
        let angle = if rotation {
            rest[0]
                .parse::<f64>()
                .map_err(|e| Error::domain(format!("bad angle {:?}: {e}", rest[0])))?
        } else {
            0.0
        };
        let qubits = rest[usize::from(rotation)..]
            .iter()
            .map(|q| {
                q.parse::<usize>()
                    .map_err(|e| Error::domain(format!("bad qubit {q:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        use Gate::*;
        Ok(match kind.as_str() {
            "X" => X(qubits[0]),
            "Y" => Y(qubits[0]),
            "Z" => Z(qubits[0]),
            "H" => H(qubits[0]),
            "RX" => Rx(qubits[0], angle),
            "RY" => Ry(qubits[0], angle),
            "RZ" => Rz(qubits[0], angle),
            "CZ" => Cz(qubits[0], qubits[1]),
            "CNOT" => Cnot(qubits[0], qubits[1]),
            _ => XxPlusYy(qubits[0], qubits[1], angle),
        })
    }
}
