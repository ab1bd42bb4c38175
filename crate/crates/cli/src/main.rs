use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pielou_cli::reproduce::{write_artifacts, DEFAULT_REPRODUCE_TOL};
use pielou_cli::scenario::check_tol;
use pielou_cli::{load_scenario, reproduce, run_analyze, run_sweep, simulate, CliError, ExampleId};

#[derive(Debug, Parser)]
#[command(
    name = "pielou-dyn",
    version,
    about = "Exponential Pielou system: orbits, equilibria and stability conditions"
)]
struct Cli {
    /// Directory for all outputs, overriding paths in input files.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Tolerance overriding the input file's value.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate every initial condition and write one orbit CSV each.
    Simulate { scenario: PathBuf },
    /// Classify the parameters and write the certificate JSON.
    Analyze { scenario: PathBuf },
    /// Compare against the worked examples (4.1 or 4.2).
    Reproduce { example: String },
    /// Classify a parameter grid and write it as CSV.
    Sweep { spec: PathBuf },
}

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(tol) = cli.tol {
        check_tol(tol)?;
    }
    let out_dir = cli.out_dir.as_deref();
    match cli.command {
        Command::Simulate { scenario } => {
            let loaded = load_scenario(&scenario, cli.tol)?;
            emit(&simulate(&loaded, out_dir)?.summary);
        }
        Command::Analyze { scenario } => {
            let loaded = load_scenario(&scenario, cli.tol)?;
            emit(&run_analyze(&loaded, out_dir)?.summary);
        }
        Command::Reproduce { example } => {
            let id = ExampleId::parse(&example)?;
            let rep = reproduce(id, cli.tol.unwrap_or(DEFAULT_REPRODUCE_TOL))?;
            emit(&rep.to_string());
            if let Some(dir) = out_dir {
                for path in write_artifacts(&rep, dir)? {
                    emit(&format!("wrote {}\n", path.display()));
                }
            }
            if !rep.passed() {
                return Err(CliError::ReproductionFailed(rep.failures()));
            }
        }
        Command::Sweep { spec } => {
            let outcome = run_sweep(&spec, out_dir, cli.tol)?;
            emit(&format!(
                "{} rows written to {}\n",
                outcome.rows.len(),
                outcome.path.display()
            ));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
