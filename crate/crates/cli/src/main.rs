//! `qharm` command-line front end.

mod commands;
mod table;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qharm::QError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid parameter `{0}`: {1}")]
    Invalid(String, String),
    #[error(transparent)]
    Lib(#[from] QError),
    #[error("{0}")]
    Io(String),
    #[error("{0} propert(y/ies) failed")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn invalid(name: &str, reason: impl Into<String>) -> Self {
        CliError::Invalid(name.to_string(), reason.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(QError::NonConvergent { .. }) => 2,
            CliError::Lib(QError::CapExceeded(_)) => 3,
            CliError::VerifyFailed(_) => 4,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Args)]
pub struct Global {
    /// deformation parameter, as `p/q` or an exact decimal
    #[arg(long, global = true)]
    pub q: Option<String>,
    /// exact arithmetic in Q(sqrt(q))
    #[arg(long, global = true, conflicts_with = "float")]
    pub exact: bool,
    /// double-precision arithmetic
    #[arg(long, global = true)]
    pub float: bool,
    /// cap on series terms
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// absolute tolerance for truncated sums and quadrature
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// seed for randomised property runs
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// write the table to FILE instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "qharm", version, about = "q-series, quantum disc harmonic analysis and noncommutative rewriting")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// q-Pochhammer symbols, q-Gamma, Gaussian binomials, basic hypergeometric series
    Qseries {
        #[command(subcommand)]
        op: commands::QseriesOp,
    },
    /// basic hypergeometric orthogonal polynomials
    Orth {
        #[command(subcommand)]
        op: commands::OrthOp,
    },
    /// noncommutative Groebner bases of relation presets or files
    Groebner(commands::GroebnerArgs),
    /// the quantum disc: normal forms, Laplacian, spherical functions, Plancherel data
    Disc {
        #[command(subcommand)]
        op: commands::DiscOp,
    },
    /// weighted Bergman spaces, Toeplitz operators and the Berezin transform
    Bergman {
        #[command(subcommand)]
        op: commands::BergmanOp,
    },
    /// Berezin star product as a series in t
    Star(commands::StarArgs),
    /// run the invariant suites and report pass/fail per property
    Verify(verify::VerifyArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(table) => {
            let text = match cli.global.format {
                Format::Json => table.to_json(),
                Format::Csv => table.to_csv(),
            };
            let failed = verify::failures(&table);
            if let Err(e) = emit(&cli.global, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            if failed > 0 {
                let e = CliError::VerifyFailed(failed);
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(global: &Global, text: &str) -> CliResult<()> {
    match &global.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
