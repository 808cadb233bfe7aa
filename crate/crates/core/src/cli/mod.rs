//! The `netgen` command line.
//!
//! Every command is a pure function of its inputs, settings and seed. All
//! computation finishes before any output file is written, and every
//! artifact records the effective settings.

mod commands;
mod config;
mod inputs;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{Overrides, Settings, SEED_ENV};
pub use inputs::{load_entries, parse_generator_text, read_generator, read_matrix_csv, Entry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn computation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_COMPUTATION,
            message: message.into(),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error as E;
        match e {
            E::Io { .. } | E::Format { .. } | E::Parse(_) | E::Json(_) => {
                CliError::usage(e.to_string())
            }
            _ => CliError::computation(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "netgen",
    version,
    about = "Discover, run, compare and classify network generators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Master seed (default from the NETGEN_SEED environment variable, else 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Independent evolutionary runs.
    #[arg(long, global = true)]
    pub runs: Option<usize>,
    /// Node count of synthesized or canonical networks.
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Edge count of synthesized or canonical networks.
    #[arg(long, global = true)]
    pub edges: Option<usize>,
    /// Candidate pool size per added edge.
    #[arg(long, global = true)]
    pub sample_size: Option<usize>,
    /// Generation budget per run.
    #[arg(long, global = true)]
    pub generations: Option<usize>,
    /// Output file or directory (stdout when omitted and allowed).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key=value` settings file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Remove the node with this label and its edges before use.
    #[arg(long, global = true)]
    pub drop_ego: Option<u64>,
    /// Also write an SVG scatter plot (embed).
    #[arg(long, global = true)]
    pub svg: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a generator reproducing a target edge list.
    Evolve { target: PathBuf },
    /// Grow a network from a generator file.
    Synth { generator: PathBuf },
    /// Score a generator against a target edge list.
    Fitness { target: PathBuf, generator: PathBuf },
    /// Pairwise dissimilarity matrices of a generator collection.
    Atlas {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// 2-D SMACOF embedding of an atlas directory or combined matrix CSV.
    Embed { input: PathBuf },
    /// Family labels for generator tables, files or directories.
    Classify {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Summary statistics of an edge list.
    Stats { input: PathBuf },
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            runs: self.runs,
            nodes: self.nodes,
            edges: self.edges,
            sample_size: self.sample_size,
            generations: self.generations,
            drop_ego: self.drop_ego,
        }
    }
}

/// Runs one invocation, writing diagnostics to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let result = Settings::resolve(env_seed.as_deref(), cli.config.as_deref(), &cli.overrides())
        .and_then(|settings| commands::dispatch(&cli, &settings, stdout));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "netgen: {}", e.message);
            e.code
        }
    }
}

pub fn main_exit() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
