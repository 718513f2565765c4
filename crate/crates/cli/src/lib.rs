//! Command-line front end: subcommands, input loading and reports.

mod commands;
pub mod input;
mod report;

use clap::{Args, Parser, Subcommand};
use divaria_core::conformal::ModuleChoice;

pub use report::{Report, Section, Status};

/// Exit code when every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code when a mathematical check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for unreadable or malformed input.
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "divaria", version, about = "Identities, envelopes and representations of dialgebras")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the dialgebra identities derived from a variety.
    Derive {
        #[arg(long)]
        variety: String,
        /// Also rewrite the identities with a single operation.
        #[arg(long)]
        single_op: bool,
    },
    /// Check a finite-dimensional dialgebra against a variety.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        variety: Option<String>,
    },
    /// Build the envelope of a 0-dialgebra and compare its evaluators.
    Envelope {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        variety: Option<String>,
        /// Raise the word degree to 4 and add the extension checks.
        #[arg(long)]
        verify: bool,
        /// Largest word degree for the evaluator comparison.
        #[arg(long)]
        max_arity: Option<usize>,
    },
    /// Build and verify the conformal representation of a Leibniz algebra.
    Represent {
        #[arg(long)]
        leibniz: String,
        #[arg(long, default_value = "trivial")]
        module: ModuleChoice,
        /// T-degree truncation for the associative embedding check.
        #[arg(long, default_value_t = 2)]
        truncation: usize,
    },
    /// Randomized checks of the operad laws and of the translation functor.
    OperadSelftest {
        #[arg(long, default_value_t = 8)]
        max_arity: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// JSON dialgebra (`left`/`right` tables, or a Leibniz `bracket`).
    #[arg(long)]
    pub dialgebra: Option<String>,
    /// JSON Leibniz algebra, imported as its Lie dialgebra.
    #[arg(long)]
    pub leibniz: Option<String>,
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    /// Rendered report or help text.
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

/// Runs one command line (without the program name).
pub fn run<S: AsRef<str>>(args: &[S]) -> Outcome {
    let argv: Vec<String> = std::iter::once("divaria".to_string()).chain(args.iter().map(|a| a.as_ref().to_string())).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_PASS, stdout: text, stderr: String::new(), report: None }
                }
                _ => Outcome { code: EXIT_ERROR, stdout: String::new(), stderr: text, report: None },
            };
        }
    };
    let echo = argv[1..].join(" ");
    let report = commands::execute(&cli, echo);
    let code = match report.status {
        Status::Pass => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
        Status::Error => EXIT_ERROR,
    };
    let stdout = if cli.json { report.to_json() } else { report.to_text() };
    let stderr = report.error.as_ref().map(|e| format!("error: {e}\n")).unwrap_or_default();
    Outcome { code, stdout, stderr, report: Some(report) }
}
