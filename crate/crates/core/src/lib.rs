//! Classical simulation of a few-electron Wigner molecule on a ring.
//!
//! The crate builds the long-range Coulomb Hamiltonian of particles hopping on
//! an `M`-site ring, solves it exactly in the fixed-particle-number sector, and
//! estimates the same ground-state energy variationally on a simulated noisy
//! qubit register, with zero-noise extrapolation and dynamical decoupling on
//! top.
//!
//! Module map:
//!
//! - [`model`]: ring geometry, Coulomb matrix, sector and Pauli Hamiltonians.
//! - [`exact`]: basis enumeration and the dense Jacobi eigensolver oracle.
//! - [`circuit`]: gates, ASAP scheduling, statevector and density-matrix simulation.
//! - [`vqe`]: ansätze, a COBYLA implementation and the VQE driver.
//! - [`mitigation`]: circuit inversion, global folding, extrapolation and DD.
//!
//! Energies are in units of the hopping amplitude `t`. Qubit `k` is bit `k`
//! (least significant first) of every basis-state index and occupation mask.

pub mod circuit;
pub mod error;
pub mod exact;
pub mod mitigation;
pub mod model;
pub mod numfmt;
pub mod vqe;

pub use error::{Error, Result};
