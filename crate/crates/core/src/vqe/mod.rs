//! Variational ground-state search.

mod ansatz;
mod cobyla;
mod driver;

pub use ansatz::{build_ansatz, AnsatzKind, AnsatzSpec};
pub use cobyla::{cobyla_minimize, Minimum, OptimizerConfig};
pub use driver::{
    initial_parameters, number_penalty_weight, relative_error, run_vqe, run_vqe_from, EnergyObjective, VqeResult,
};
