//! Batch front door for the dispersion-energy engine: curve sweeps over a
//! distance grid, regime reports, response inspection, and the built-in
//! validation suite. Outputs are deterministic byte-for-byte for a fixed
//! configuration and version.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod config;
mod curve;
mod inspect;
mod regimes;
mod validate;

/// One failure class per exit code: the suite reporting failures (1), bad
/// input or configuration (2), numerical trouble at run time (3).
#[derive(Debug)]
pub enum Failure {
    ChecksFailed(usize),
    Input(String),
    Numerical(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::ChecksFailed(_) => 1,
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

/// Engine errors at computation time split by kind: resonances, pole hits,
/// and non-convergence are numerical conditions of the model; everything
/// else means the inputs were unusable.
pub fn engine_failure(e: polder::Error) -> Failure {
    match e {
        polder::Error::Resonance { .. }
        | polder::Error::PoleHit { .. }
        | polder::Error::Convergence { .. } => Failure::Numerical(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrescriptionArg {
    /// Time-ordered displacement: both response poles below the real axis
    /// shifted the Feynman way; the only prescription the shift accepts.
    Feynman,
    /// All response poles in the lower half-plane; accepted by `inspect`
    /// only, as befits a material response function.
    Retarded,
}

#[derive(Parser)]
#[command(
    name = "polder",
    version,
    about = "Dispersion (van der Waals / Casimir-Polder) interaction curves for model atom pairs"
)]
struct Cli {
    /// Worker threads for grid sweeps; defaults to POLDER_THREADS or all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Response-pole prescription; `retarded` is accepted by `inspect` only.
    #[arg(long, global = true, value_enum, default_value_t = PrescriptionArg::Feynman)]
    prescription: PrescriptionArg,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Sweep the shift decomposition over the configured distance grid into
    /// a CSV plus a JSON metadata sidecar.
    Curve {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for the CSV and JSON files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Summarize the near-zone dispersion sum, the retarded tail, the
    /// oscillatory envelopes, and their crossover into a JSON report.
    Regimes {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for the JSON report.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the built-in validation suite and report each named invariant.
    Validate {
        /// Emit the results as a JSON array instead of text lines.
        #[arg(long)]
        json: bool,
    },
    /// Print one atom's response tensor at a chosen frequency as JSON.
    Inspect {
        #[arg(long)]
        config: PathBuf,
        /// Which atom of the pair to inspect.
        #[arg(long, default_value = "A")]
        atom: String,
        /// Frequency in hartree.
        #[arg(long)]
        omega: f64,
        /// Place the frequency on the positive imaginary axis instead.
        #[arg(long)]
        imaginary: bool,
        /// Gas number density (atoms per cubic bohr); adds the relative
        /// permittivity to the report.
        #[arg(long)]
        density: Option<f64>,
    },
}

fn thread_count(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("POLDER_THREADS") {
        Ok(raw) => raw.parse::<usize>().map_err(|_| {
            Failure::Input(format!(
                "POLDER_THREADS must be a non-negative integer, got \"{raw}\""
            ))
        }),
        Err(_) => Ok(0), // 0 lets the pool pick the core count
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.prescription == PrescriptionArg::Retarded && !matches!(cli.verb, Verb::Inspect { .. }) {
        return Err(Failure::Input(
            "the retarded prescription applies to response inspection only; \
             shift computation and the validation suite are time-ordered"
                .into(),
        ));
    }
    let threads = thread_count(cli.threads)?;
    match cli.verb {
        Verb::Curve { config, out } => {
            let loaded = config::load(&config)?;
            curve::run(&loaded, &out, threads)
        }
        Verb::Regimes { config, out } => {
            let loaded = config::load(&config)?;
            regimes::run(&loaded, &out)
        }
        Verb::Validate { json } => validate::run(json),
        Verb::Inspect {
            config,
            atom,
            omega,
            imaginary,
            density,
        } => {
            let loaded = config::load(&config)?;
            inspect::run(&loaded, &atom, omega, imaginary, cli.prescription, density)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::ChecksFailed(n) => eprintln!("error: {n} validation check(s) failed"),
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Numerical(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
