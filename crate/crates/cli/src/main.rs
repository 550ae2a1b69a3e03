use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use wigner_cli::emit::{render_exact, render_sweep, write_output};
use wigner_cli::sweep::{exact_report, workers_from_env};
use wigner_cli::{run_sweep_with, CliError, Format, Overrides, RunConfig, Series};
use wigner_core::model::build_pauli_hamiltonian;
use wigner_core::vqe::{build_ansatz, AnsatzSpec, EnergyObjective};

/// Exact and variational ground-state energies of particles on a ring with
/// long-range Coulomb repulsion.
#[derive(Parser)]
#[command(name = "wigner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact ground state at the configured coupling.
    Exact {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        set: OverrideArgs,
        /// Write the qubit Hamiltonian as Pauli text.
        #[arg(long, value_name = "PATH")]
        dump_hamiltonian: Option<PathBuf>,
    },
    /// One VQE run at the configured coupling. Exits with 3 if the optimizer
    /// runs out of evaluations.
    Vqe {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        set: OverrideArgs,
        /// Write the minimised operator as Pauli text.
        #[arg(long, value_name = "PATH")]
        dump_hamiltonian: Option<PathBuf>,
        /// Write the optimal circuit, one gate per line.
        #[arg(long, value_name = "PATH")]
        dump_circuit: Option<PathBuf>,
        /// Write every objective evaluation as `index<TAB>energy`.
        #[arg(long, value_name = "PATH")]
        history: Option<PathBuf>,
    },
    /// Exact, raw and mitigated energies over evenly spaced couplings.
    Sweep {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        set: OverrideArgs,
        /// Worker threads for cold-started sweeps [env: WIGNER_WORKERS].
        #[arg(long)]
        workers: Option<usize>,
        /// Exit with 3 if any point's optimizer ran out of evaluations.
        #[arg(long)]
        require_convergence: bool,
    },
}

#[derive(Args)]
struct IoArgs {
    /// TOML configuration file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// csv, json or plotdata.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Energy column for plotdata: exact, raw or mitigated.
    #[arg(long, default_value = "raw")]
    series: Series,
}

#[derive(Args)]
struct OverrideArgs {
    /// Coupling for `exact` and `vqe`.
    #[arg(long, short = 'u')]
    interaction: Option<f64>,
    /// hardcore-boson or spinless-fermion.
    #[arg(long, value_parser = kebab::<wigner_core::model::Statistics>)]
    statistics: Option<wigner_core::model::Statistics>,
    #[arg(long)]
    u_min: Option<f64>,
    #[arg(long)]
    u_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Start every sweep point from fresh random parameters.
    #[arg(long)]
    cold_start: bool,
    /// number-preserving or hardware-efficient.
    #[arg(long, value_parser = kebab::<wigner_core::vqe::AnsatzKind>)]
    ansatz: Option<wigner_core::vqe::AnsatzKind>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    max_evaluations: Option<usize>,
    /// Simulate an ideal device.
    #[arg(long)]
    noiseless: bool,
    /// Disable both extrapolation and decoupling.
    #[arg(long)]
    no_mitigation: bool,
    #[arg(long)]
    no_dd: bool,
    /// Extrapolation fit: richardson or linear.
    #[arg(long, value_parser = kebab::<wigner_core::mitigation::ExtrapolationFit>)]
    fit: Option<wigner_core::mitigation::ExtrapolationFit>,
}

impl From<&OverrideArgs> for Overrides {
    fn from(a: &OverrideArgs) -> Self {
        Overrides {
            interaction: a.interaction,
            statistics: a.statistics,
            u_min: a.u_min,
            u_max: a.u_max,
            points: a.points,
            seed: a.seed,
            cold_start: a.cold_start,
            ansatz: a.ansatz,
            layers: a.layers,
            max_evaluations: a.max_evaluations,
            noiseless: a.noiseless,
            no_mitigation: a.no_mitigation,
            no_dd: a.no_dd,
            fit: a.fit,
        }
    }
}

/// Parses an enum from its configuration-file spelling.
fn kebab<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn load(io: &IoArgs, set: &OverrideArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &io.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(&set.into());
    Ok(cfg)
}

fn dump(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_output(Some(p.as_path()), text),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Exact {
            io,
            set,
            dump_hamiltonian,
        } => {
            let cfg = load(&io, &set)?;
            let ring = cfg.ring();
            ring.validate().map_err(|e| CliError::Config(e.to_string()))?;
            dump(&dump_hamiltonian, &build_pauli_hamiltonian(&ring)?.to_text())?;
            write_output(io.out.as_deref(), &render_exact(&exact_report(&ring)?, io.format))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Vqe {
            io,
            set,
            dump_hamiltonian,
            dump_circuit,
            history,
        } => {
            let cfg = load(&io, &set)?;
            let sweep = cfg.single_point()?;
            let report = run_sweep_with(&sweep, Some(1))?;
            let ring = sweep.ring.with_interaction(sweep.u_min);
            let spec = AnsatzSpec::for_ring(&ring, sweep.ansatz.kind, sweep.ansatz.layers)?;
            let point = &report.diagnostics[0];
            if dump_hamiltonian.is_some() {
                let objective = EnergyObjective::new(&ring, &spec, None, None)?;
                dump(&dump_hamiltonian, &objective.hamiltonian().to_text())?;
            }
            dump(&dump_circuit, &build_ansatz(&spec, &point.parameters)?.to_text())?;
            let trace: String = point.history.iter().map(|(k, e)| format!("{k}\t{e}\n")).collect();
            dump(&history, &trace)?;
            write_output(io.out.as_deref(), &render_sweep(&sweep, &report, io.format, io.series)?)?;
            if !point.converged {
                eprintln!(
                    "optimizer stopped after {} evaluations without converging",
                    point.evaluations
                );
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            io,
            set,
            workers,
            require_convergence,
        } => {
            let cfg = load(&io, &set)?;
            let sweep = cfg.sweep()?;
            let workers = match workers {
                Some(0) => return Err(CliError::Config("--workers must be positive".into())),
                Some(n) => Some(n),
                None => workers_from_env()?,
            };
            let report = run_sweep_with(&sweep, workers)?;
            write_output(io.out.as_deref(), &render_sweep(&sweep, &report, io.format, io.series)?)?;
            if require_convergence && !report.converged() {
                let stalled: Vec<String> = report
                    .diagnostics
                    .iter()
                    .filter(|d| !d.converged)
                    .map(|d| d.u.to_string())
                    .collect();
                eprintln!("optimizer did not converge at U = {}", stalled.join(", "));
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("wigner: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
