//! Command-line surface over workbench files.
//!
//! Each command prints a few human-readable lines followed by
//! `key=value` lines. The `verdict` key alone determines the exit code:
//! `yes` and `refuted` exit 0, `no` exits 1, `error` exits 2, and
//! `inconclusive` exits 3.

mod commands;
mod file;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use file::{
    eio_document, from_doc, parse_file, parse_str, temporal_document, BuiltinModel, BuiltinSet,
    BuiltinSetup, ExplicitModel, ModelDoc, PropertyDoc, SetDoc, SetupDoc, Universe, Workbench,
    WorkbenchDoc,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:{line}:{column}: parse error: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Validation {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Algorithmic(#[from] crate::algorithmic::AlgorithmicError),
}

impl From<crate::setup::SetupError> for CliError {
    fn from(e: crate::setup::SetupError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::order::OrderError> for CliError {
    fn from(e: crate::order::OrderError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::temporal::TemporalError> for CliError {
    fn from(e: crate::temporal::TemporalError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Refuted,
    Inconclusive,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Yes | Verdict::Refuted => 0,
            Verdict::No => 1,
            Verdict::Error => 2,
            Verdict::Inconclusive => 3,
        }
    }

    fn of(holds: bool) -> Self {
        if holds {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Error => "error",
        })
    }
}

/// Rendered command output.
#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    pub lines: Vec<String>,
    pub fields: Vec<(String, String)>,
    /// Printed verbatim instead of the report (generators).
    pub raw: Option<String>,
}

impl Report {
    fn new(verdict: Verdict) -> Self {
        Report {
            verdict,
            lines: Vec::new(),
            fields: Vec::new(),
            raw: None,
        }
    }

    fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self, out: &mut dyn Write) -> io::Result<()> {
        if let Some(raw) = &self.raw {
            return writeln!(out, "{raw}");
        }
        for l in &self.lines {
            writeln!(out, "{l}")?;
        }
        writeln!(out, "verdict={}", self.verdict)?;
        for (k, v) in &self.fields {
            writeln!(out, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "testability",
    version,
    about = "Refutability, verifiability and refutation campaigns over ordered system models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ReqArgs {
    /// Workbench file (`.json` may be omitted).
    #[arg(long)]
    pub file: PathBuf,
    /// Requirement name.
    #[arg(long = "req")]
    pub req: String,
}

#[derive(Debug, Args)]
pub struct SetupArgs {
    #[command(flatten)]
    pub target: ReqArgs,
    /// Setup name.
    #[arg(long)]
    pub setup: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report obligation / prohibition / trivial / semi-monotone flags.
    Classify(ReqArgs),
    /// Print the up- and down-closure of a requirement.
    Closure(ReqArgs),
    /// Decide refutability, with a witness per violator.
    Refutable(SetupArgs),
    /// Decide verifiability, with a witness per satisfier.
    Verifiable(SetupArgs),
    /// List the irremediable observations of a requirement.
    Omega(SetupArgs),
    /// Decide refutability under an assumption.
    RefutableUnder {
        #[command(flatten)]
        target: SetupArgs,
        #[arg(long)]
        assumption: String,
    },
    /// Print the residual prohibition of a requirement under an assumption.
    Residual {
        #[command(flatten)]
        target: ReqArgs,
        #[arg(long)]
        assumption: String,
    },
    /// Refute the residual prohibition for one system, then verify the assumption.
    CampaignReduce {
        #[command(flatten)]
        target: SetupArgs,
        #[arg(long)]
        assumption: String,
        /// System identifier.
        #[arg(long)]
        system: String,
    },
    /// Run the dovetailed refutation search against a black-box process.
    Campaign(CampaignArgs),
    /// Temporal universes and properties.
    #[command(subcommand)]
    Temporal(TemporalCommand),
    /// Input-output grid universes.
    #[command(subcommand)]
    Eio(EioCommand),
    /// Compare two setups by the requirements they refute.
    Permissive {
        #[arg(long)]
        file: PathBuf,
        /// Setup expected to refute at least as much.
        #[arg(long)]
        more: String,
        #[arg(long)]
        less: String,
        /// Largest model to enumerate all requirements of.
        #[arg(long, default_value_t = crate::setup::DEFAULT_PERMISSIVE_CAP)]
        cap: usize,
    },
    /// Check the structural theorems on seeded random instances.
    Check {
        #[arg(long, default_value_t = crate::sampling::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_elements: usize,
    },
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    /// Black-box command line; split into words, run without a shell.
    #[arg(long)]
    pub cmd: String,
    /// Irremediable observations to look for: `odd-zero` or `zero`.
    #[arg(long)]
    pub omega: String,
    #[arg(long, default_value_t = 500)]
    pub budget: usize,
    /// Comma-separated input schedule.
    #[arg(long, default_value = "0,1,2,3", value_delimiter = ',')]
    pub inputs: Vec<u64>,
    /// Wall-clock quantum per step, in milliseconds.
    #[arg(long, default_value_t = 10)]
    pub quantum_ms: u64,
    /// Steps the oracle takes per membership check.
    #[arg(long, default_value_t = 1)]
    pub oracle_cost: usize,
    /// Print the scheduler log.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Subcommand)]
pub enum TemporalCommand {
    /// Emit a workbench file for a temporal universe.
    Gen {
        /// Symbols, one character each.
        #[arg(long, default_value = "ab")]
        alphabet: String,
        #[arg(long, default_value_t = 1)]
        stem_bound: usize,
        #[arg(long, default_value_t = 2)]
        loop_bound: usize,
        #[arg(long, default_value_t = crate::temporal::DEFAULT_PREFIX_DEPTH)]
        prefix_depth: usize,
        #[arg(long, default_value_t = crate::temporal::DEFAULT_SET_CAP)]
        set_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a property is safety, with bad prefixes.
    Safety(PropertyArgs),
    /// Decide whether a property is liveness.
    Liveness(PropertyArgs),
    /// Split a property into safety and liveness parts.
    Decompose(PropertyArgs),
    /// Decide hyper-safety (refutability in T_*) of a requirement.
    Hypersafety(ReqArgs),
    /// List the irremediable finite words of a property.
    Nabla(PropertyArgs),
}

#[derive(Debug, Args)]
pub struct PropertyArgs {
    #[arg(long)]
    pub file: PathBuf,
    /// Property name, or `never:x`, `eventually:x`, `always:x`, `infinitely:x`.
    #[arg(long)]
    pub property: String,
}

#[derive(Debug, Subcommand)]
pub enum EioCommand {
    /// Emit a workbench file for the grid of the given bound.
    Gen {
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match commands::execute(cli.command) {
        Ok(report) => {
            if report.render(out).is_err() {
                return 2;
            }
            report.verdict.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(out, "verdict=error");
            Verdict::Error.exit_code()
        }
    }
}

/// Runs a parsed command and returns its report.
pub fn execute(command: Command) -> Result<Report, CliError> {
    commands::execute(command)
}
