//! Command-line front end: input documents, subcommands and reports.

pub mod commands;
pub mod document;
pub mod output;
pub mod selftest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::{CommandError, GroupoidKind, HomotopyOp};
use document::LoadError;
use output::{Failure, Outcome};
use xmod2_core::{Error, Policy};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "xmod2", version, about = "Validate 2-crossed modules of commutative algebras and check their homotopy laws")]
struct Cli {
    /// Also write the report as canonical JSON to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Sampling {
    /// Random samples per law on infinite-dimensional algebras [default: 100].
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// Degree bound for sampled and enumerated elements [default: 4].
    #[arg(long, value_name = "D")]
    max_degree: Option<usize>,
    /// Seed for all sampling; falls back to XMOD2_SEED, then 0.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a document and run every validator on every structure in it.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Build the simplex algebras of a 2-crossed module and check the simplicial identities.
    Simplicial {
        file: PathBuf,
        #[arg(long, value_name = "NAME")]
        module: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Apply, compose, invert or reassociate named derivations.
    Homotopy {
        #[arg(value_enum)]
        op: HomotopyOp,
        file: PathBuf,
        /// Comma-separated derivation names, in composition order.
        #[arg(long, value_delimiter = ',', required = true, value_name = "NAMES")]
        names: Vec<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run the groupoid laws on sampled homotopies between two named structures.
    Groupoid {
        #[arg(value_enum)]
        kind: GroupoidKind,
        file: PathBuf,
        #[arg(long, value_name = "NAME")]
        source: String,
        #[arg(long, value_name = "NAME")]
        target: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run the built-in suite on the shipped fixtures and on random structures.
    Selftest {
        #[command(flatten)]
        sampling: Sampling,
    },
}

impl Command {
    fn sampling(&self) -> &Sampling {
        match self {
            Command::Validate { sampling, .. }
            | Command::Simplicial { sampling, .. }
            | Command::Homotopy { sampling, .. }
            | Command::Groupoid { sampling, .. }
            | Command::Selftest { sampling } => sampling,
        }
    }

    fn label(&self) -> String {
        match self {
            Command::Validate { .. } => "validate".into(),
            Command::Simplicial { .. } => "simplicial".into(),
            Command::Homotopy { op, .. } => format!("homotopy {}", format!("{op:?}").to_lowercase()),
            Command::Groupoid { kind, .. } => format!("groupoid {}", format!("{kind:?}").to_lowercase()),
            Command::Selftest { .. } => "selftest".into(),
        }
    }
}

fn policy(s: &Sampling) -> Result<Policy, String> {
    let seed = match s.seed {
        Some(seed) => seed,
        None => match std::env::var("XMOD2_SEED") {
            Ok(v) => v.trim().parse().map_err(|_| format!("XMOD2_SEED={v:?} is not an unsigned integer"))?,
            Err(_) => 0,
        },
    };
    let d = Policy::default();
    Ok(Policy { max_degree: s.max_degree.unwrap_or(d.max_degree), samples: s.samples.unwrap_or(d.samples), seed })
}

fn failure(kind: &str, message: String, witness: Option<Vec<String>>) -> Failure {
    Failure { kind: kind.into(), message, witness }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::FreeBasisRequired(_) => "FreeBasisRequired",
        Error::CompositionMismatch(_) => "CompositionMismatch",
        Error::Violation { .. } => "Violation",
        _ => "Error",
    }
}

/// Runs one command line; returns the exit code. Output goes to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let policy = match policy(cli.command.sampling()) {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let label = cli.command.label();
    let result = match &cli.command {
        Command::Validate { file, .. } => commands::validate(file, &policy),
        Command::Simplicial { file, module, .. } => commands::simplicial(file, module, &policy),
        Command::Homotopy { op, file, names, .. } => commands::homotopy(*op, file, names, &policy),
        Command::Groupoid { kind, file, source, target, .. } => commands::groupoid(*kind, file, source, target, &policy),
        Command::Selftest { .. } => Ok(selftest::selftest(&policy)),
    };
    let (outcome, mut code) = match result {
        Ok(mut report) => {
            report.command = label;
            let o = Outcome::new(report, policy);
            let code = if o.passed() { EXIT_PASS } else { EXIT_FAIL };
            (o, code)
        }
        Err(CommandError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(CommandError::Load(e)) => {
            let code = match e {
                LoadError::Io { .. } => EXIT_IO,
                LoadError::Parse { .. } | LoadError::UnresolvedReference { .. } => EXIT_USAGE,
                LoadError::Validation { .. } => EXIT_FAIL,
            };
            let witness = match &e {
                LoadError::Validation { structure, axiom, witness, .. } => {
                    Some([vec![structure.clone(), axiom.clone()], witness.clone()].concat())
                }
                _ => None,
            };
            (Outcome::failed(&label, policy, failure(e.kind(), e.to_string(), witness)), code)
        }
        Err(CommandError::Core(e)) => {
            let witness = e.witness().map(|w| w.to_vec());
            (Outcome::failed(&label, policy, failure(error_kind(&e), format!("{}: {e}", error_kind(&e)), witness)), EXIT_FAIL)
        }
    };
    let _ = write!(out, "{}", outcome.human());
    if let Some(f) = &outcome.error {
        let _ = writeln!(err, "error: {}", f.message);
    }
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, outcome.canonical_json()) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            code = EXIT_IO;
        }
    }
    code
}
