//! Batch front end for `ncg-core`. Every subcommand validates its arguments,
//! runs one pipeline, and writes a deterministic report.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod svg;

pub use commands::{CalculusCommand, FuzzyCommand, HomologyCommand, MetricCommand};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for malformed arguments or inputs.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit code when a checked property does not hold.
pub const EXIT_PROPERTY: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ncg_core::Error),

    #[error("{path}:{line}:{column}: {message}")]
    Input {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("check failed: {0}")]
    Property(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Property(_) => EXIT_PROPERTY,
            CliError::Core(ncg_core::Error::Internal(_) | ncg_core::Error::RelationViolation { .. }) => EXIT_PROPERTY,
            _ => EXIT_VALIDATION,
        }
    }

    /// Attaches the file name to parse errors coming from `path`.
    pub(crate) fn in_file(path: &Path, err: ncg_core::Error) -> Self {
        match err {
            ncg_core::Error::Parse { line, column, message } => CliError::Input {
                path: path.display().to_string(),
                line,
                column,
                message,
            },
            ncg_core::Error::UnknownGenerator { name, column } => CliError::Input {
                path: path.display().to_string(),
                line: 1,
                column,
                message: format!("unknown generator `{name}`"),
            },
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ncg", version, about = "Computational noncommutative geometry workbench")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fuzzy sphere identities and Berezin estimates.
    #[command(subcommand)]
    Fuzzy(FuzzyCommand),
    /// State-space metrics on the fuzzy sphere.
    #[command(subcommand)]
    Metric(MetricCommand),
    /// Hochschild and cyclic (co)homology of finite algebras.
    #[command(subcommand)]
    Homology(HomologyCommand),
    /// Universal calculi, Hodge decomposition and derivations.
    #[command(subcommand)]
    Calculus(CalculusCommand),
    /// Clifford algebras and Dirac operators.
    #[command(subcommand)]
    Clifford(commands::CliffordCommand),
    /// Rewriting and Hopf axioms for q-deformed algebras.
    #[command(subcommand)]
    Hopf(commands::HopfCommand),
}

/// Outcome of a subcommand: the report text and whether every check held.
pub(crate) struct Report {
    pub text: String,
    pub failure: Option<String>,
}

impl Report {
    pub fn ok(text: String) -> Self {
        Report { text, failure: None }
    }
}

/// Caps the rayon pool at `NCG_THREADS` when set.
fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("NCG_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Argument(format!("NCG_THREADS must be a positive integer, got `{value}`")))?;
    // A pool may already exist when `run` is called twice in one process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn execute(cli: Cli) -> CliResult<Report> {
    configure_threads()?;
    match cli.command {
        Command::Fuzzy(c) => c.run(),
        Command::Metric(c) => c.run(),
        Command::Homology(c) => c.run(),
        Command::Calculus(c) => c.run(),
        Command::Clifford(c) => c.run(),
        Command::Hopf(c) => c.run(),
    }
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `argv` (including the program name), runs the pipeline and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let output = cli.output.clone();
    let result = execute(cli).and_then(|report| {
        emit(output.as_deref(), &report.text)?;
        Ok(report.failure)
    });
    match result {
        Ok(None) => EXIT_OK,
        Ok(Some(reason)) => {
            eprintln!("ncg: check failed: {reason}");
            EXIT_PROPERTY
        }
        Err(e) => {
            eprintln!("ncg: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
