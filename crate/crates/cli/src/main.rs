//! `qlie`: validate quantum Lie algebra data, build and verify BRST operators.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report
//! names it), 2 for bad usage or unreadable input.

mod commands;
mod report;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "qlie", version, about = "Exact workbench for quantum Lie algebras and their BRST operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the quantum Lie algebra axioms and build the antisymmetrizer tower.
    Validate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Solve for the BRST coefficients and write an artifact.
    Brst {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        caps: CapArgs,
        /// Continue when the axiom checks fail.
        #[arg(long)]
        force: bool,
    },
    /// Re-check an artifact against its algebra: d² = 0, the χ-linear
    /// identities and the operator relations.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        caps: CapArgs,
        /// Artifact written by `brst`.
        #[arg(long)]
        artifact: PathBuf,
        /// Also compare against independently gauged solutions.
        #[arg(long)]
        gauge_check: bool,
    },
    /// U_q(gl(N)) data, the generic pipeline on it, and the closed-form operator.
    Uqgl {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, conflicts_with = "symbolic")]
        q: Option<String>,
        #[arg(long)]
        symbolic: bool,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        caps: CapArgs,
        /// Check Q² = 0, [Q, L] = 0 and [Q, J]₊ = (1 − L)/λ for the closed form.
        #[arg(long)]
        closed_form: bool,
        /// Compare the q → 1 limit of the closed form with the classical operator.
        #[arg(long)]
        classical_limit: bool,
    },
    /// Write a preset as an algebra-spec file.
    ExportPreset {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, conflicts_with = "symbolic")]
        q: Option<String>,
        #[arg(long)]
        symbolic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Algebra-spec file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    input: Option<PathBuf>,
    /// One of sl2, gl2, gl1|1, uq-gl.
    #[arg(long)]
    preset: Option<String>,
    /// N for the uq-gl preset.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, conflicts_with = "symbolic")]
    q: Option<String>,
    #[arg(long)]
    symbolic: bool,
}

#[derive(Args, Clone)]
struct CapArgs {
    /// Largest χ-degree of the checked basis.
    #[arg(long)]
    chi_cap: Option<usize>,
    /// Largest γ-degree of the checked basis.
    #[arg(long)]
    gamma_cap: Option<usize>,
    /// Largest n for which the antisymmetrizer A(1→n) is built.
    #[arg(long)]
    height_cap: Option<usize>,
    /// Worker threads for the sweeps.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Report file (artifact file for `brst`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Bad usage or input; exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
