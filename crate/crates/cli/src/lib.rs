//! The `metacalc` command line: calculus files, subcommands and reports.
//!
//! [`execute`] runs one invocation and returns its exit code with the bytes
//! destined for standard output and standard error.

mod commands;
pub mod file;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use file::{load_calculus, parse_calculus_file, parse_rule, FileBounds, FileError, Loaded};
pub use report::{Format, Report};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {error}")]
    File { path: String, error: FileError },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Budget(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "metacalc", version, about = "Bounded workbench for syntactic logical calculi")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Run every data-parallel loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its canonical form.
    Parse(ParseArgs),
    /// List the words of a language up to a size, or decide membership.
    EnumLang(EnumLangArgs),
    /// Enumerate the bounded body of a calculus.
    EnumBody(BodyArgs),
    /// Search for a derivation of a formula.
    Derive(DeriveArgs),
    /// Show the body stage by stage, or run a staged axiom system.
    Stages(BodyArgs),
    /// Compare two calculi for logical, algorithmic or axiomatic equivalence.
    Compare(CompareArgs),
    /// Check a property of a calculus.
    Check(CheckArgs),
    /// Sample the inference relation of a calculus.
    Relation(RelationArgs),
    /// Decide m-boundedness of a finite relation.
    RelationCheck(RelationCheckArgs),
    /// Build and run the acceptor of a finite body or word list.
    Automaton(AutomatonArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct BoundArgs {
    /// Largest stage computed.
    #[arg(long)]
    max_stage: Option<usize>,
    /// Largest formula size kept, in syntax-tree nodes.
    #[arg(long)]
    max_size: Option<usize>,
    /// Largest number of theorems.
    #[arg(long)]
    budget: Option<usize>,
    /// Size cap of the schema instantiation pool.
    #[arg(long)]
    pool_size: Option<usize>,
}

impl BoundArgs {
    fn file_bounds(&self) -> FileBounds {
        FileBounds {
            max_stage: self.max_stage,
            max_formula_size: self.max_size,
            node_budget: self.budget,
            pool_size: self.pool_size,
        }
    }
}

#[derive(Args, Debug)]
struct ParseArgs {
    formula: String,
    /// Calculus whose alphabet is used.
    #[arg(long)]
    calc: Option<String>,
}

#[derive(Args, Debug)]
struct EnumLangArgs {
    /// Calculus whose alphabet generates the language.
    #[arg(long, conflicts_with = "words")]
    calc: Option<String>,
    /// A finite language given as a comma-separated word list.
    #[arg(long)]
    words: Option<String>,
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    /// Decide membership of this word instead of listing.
    #[arg(long)]
    accepts: Vec<String>,
}

#[derive(Args, Debug)]
struct BodyArgs {
    #[arg(long)]
    calc: String,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Args, Debug)]
struct DeriveArgs {
    #[arg(long)]
    calc: String,
    #[arg(long)]
    goal: String,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// logical, algorithmic or axiomatic.
    #[arg(long, default_value = "logical")]
    kind: String,
    #[arg(long)]
    calc_a: String,
    #[arg(long)]
    calc_b: String,
    /// identity, p2_to_p1 or p1_to_p2.
    #[arg(long)]
    map: Option<String>,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    calc: String,
    #[arg(long)]
    property: String,
    /// A forbidden formula, for consistent-with.
    #[arg(long)]
    forbid: Vec<String>,
    /// A forbidden schema pattern, for consistent-with.
    #[arg(long, conflicts_with = "forbid")]
    forbid_pattern: Option<String>,
    /// A metavariable of the forbidden pattern.
    #[arg(long)]
    meta: Vec<String>,
    /// The mapping of complete-mapping: negation, p2_to_p1 or p1_to_p2.
    #[arg(long)]
    map: Option<String>,
    /// A target formula, for complete-wrt.
    #[arg(long)]
    target: Vec<String>,
    /// A rule used instead of the calculus rules.
    #[arg(long)]
    rule: Vec<String>,
    /// Check the body of this machine report instead of enumerating.
    #[arg(long)]
    body: Option<PathBuf>,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Args, Debug)]
struct RelationArgs {
    #[arg(long)]
    calc: String,
    /// A formula of the premise pool.
    #[arg(long, required = true)]
    pool: Vec<String>,
    #[arg(long, default_value_t = 1)]
    max_premises: usize,
    /// Write the relation as JSON lines to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Args, Debug)]
struct RelationCheckArgs {
    /// JSON-lines relation file.
    #[arg(long)]
    relation: PathBuf,
    #[arg(long)]
    m: usize,
    /// bounded, functionally_bounded, strict or functionally_strict.
    #[arg(long, default_value = "bounded")]
    kind: String,
}

#[derive(Args, Debug)]
struct AutomatonArgs {
    /// Build from the bounded body of this calculus.
    #[arg(long, conflicts_with_all = ["words", "load"])]
    calc: Option<String>,
    /// Build from a file with one word per line.
    #[arg(long, conflicts_with = "load")]
    words: Option<PathBuf>,
    /// Read an automaton interchange file.
    #[arg(long)]
    load: Option<PathBuf>,
    /// Build the trie instead of the chain construction.
    #[arg(long)]
    trie: bool,
    /// Write the automaton interchange file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// A word to run the automaton on.
    #[arg(long)]
    accept: Vec<String>,
    /// List the accepted words up to this length.
    #[arg(long)]
    language_upto: Option<usize>,
    #[command(flatten)]
    bounds: BoundArgs,
}

/// Everything one invocation produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line; the first item is the program name.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: e.render().to_string(),
            }
        }
        Err(e) => {
            return Outcome {
                code: EXIT_HOLDS,
                stdout: e.render().to_string(),
                stderr: String::new(),
            }
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(report) => {
            let format = if cli.json { Format::Machine } else { Format::Text };
            Outcome {
                code: report.code,
                stdout: report.render(format, &echo, cli.timing.then(|| start.elapsed())),
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
