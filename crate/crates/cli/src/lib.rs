//! Command-line orchestration for the ring model: configuration loading,
//! interaction sweeps and result emission.
//!
//! The `wigner` binary is a thin wrapper around this library.

pub mod config;
pub mod emit;
pub mod error;
pub mod sweep;

pub use config::{Overrides, RunConfig};
pub use emit::{Format, Series, SweepDocument};
pub use error::{CliError, Result};
pub use sweep::{run_sweep, run_sweep_with, SweepConfig, SweepRecord, SweepReport};
