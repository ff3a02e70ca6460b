//! Command-line front end: `compute`, `sweep`, `fit`, `verify` and `demo`.

mod document;
mod output;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use document::{load_spec, parse_document, position, Document, GammaInfo, ModuleInfo, Spec, TowerInfo, SCHEMA_VERSION};
pub use output::{diagonal_svg, gamma_csv, report_csv, tower_csv, GAMMA_HEADER, REPORT_HEADER, TOWER_HEADER};
pub use run::{
    exit_code, run, Command, Outcome, RunConfig, EXIT_FAILURE, EXIT_OK, EXIT_PARSE, EXIT_PRECISION, EXIT_VERIFY,
    STRUCTURE_LAW,
};

/// Default output directory when neither `--out` nor the environment sets one.
pub const DEFAULT_OUT_DIR: &str = "iwasawa-out";
pub const OUT_DIR_ENV: &str = "IWASAWA_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "iwasawa", version, about = "p-adic invariants of Iwasawa modules and Zp^r x Zp towers")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// TOML spec document.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    out: PathBuf,
    /// Working p-adic precision N (overrides the document).
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest matrix dimension accepted.
    #[arg(long, global = true)]
    ceiling: Option<usize>,
    /// elementary, general, pseudo-null-rank, pseudo-null-homology, tech-lemma or structure-lemma.
    #[arg(long, global = true)]
    law: Option<String>,
    #[arg(long, global = true)]
    n_max: Option<u32>,
    #[arg(long, global = true)]
    m_max: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Evaluate a module or Zp[[Γ]]-module document and write report.csv.
    Compute,
    /// Tabulate a tower over (n, m) and plot the diagonal.
    Sweep,
    /// Fit mu, lambda, nu or the diagonal growth model.
    Fit,
    /// Like compute, exiting with status 4 when the check fails.
    Verify,
    /// Run the built-in fixtures.
    Demo,
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let command = match cli.command {
        Sub::Compute => Command::Compute,
        Sub::Sweep => Command::Sweep,
        Sub::Fit => Command::Fit,
        Sub::Verify => Command::Verify,
        Sub::Demo => Command::Demo,
    };
    let config = RunConfig {
        command,
        input: cli.input,
        out: cli.out,
        precision: cli.precision,
        jobs: cli.jobs,
        ceiling: cli.ceiling,
        law: cli.law,
        n_max: cli.n_max,
        m_max: cli.m_max,
    };
    let outcome = run(&config);
    if outcome.code == EXIT_OK || outcome.code == EXIT_VERIFY {
        print!("{}", outcome.summary);
    } else {
        eprint!("{}", outcome.summary);
    }
    outcome.code
}
