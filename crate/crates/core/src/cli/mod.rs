//! The `doctrines` command line: check, construct, saturate, ultrafilter,
//! quotient, model and colimit, each producing a [`Report`].
//!
//! Exit codes: 0 when every check passes, 1 on a semantic failure (a law
//! counterexample, a failed gate), 2 on usage or parse errors. Inputs are
//! document paths or `fixture:NAME`.

mod commands;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use report::{sha256_hex, CheckLine, Report, Status};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input, unknown names: exit 2.
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "doctrines", version, about = "Check and transform finitely presented doctrines")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the structure laws of a doctrine.
    Check {
        /// A document path or `fixture:NAME`.
        input: String,
        /// Comma separated layers; defaults to the declared ones.
        #[arg(long, value_delimiter = ',')]
        layers: Vec<String>,
    },
    /// Apply one construction and check the morphism it comes with.
    Construct {
        /// A document path or `fixture:NAME`.
        input: String,
        #[command(subcommand)]
        action: Construction,
        /// Where to write the resulting document.
        #[arg(long, global = true)]
        out: Option<String>,
    },
    /// Run bounded Henkin saturation.
    Saturate {
        /// A document path or `fixture:NAME`.
        input: String,
        /// Maximum number of Henkin steps; unlimited when omitted.
        #[arg(long)]
        budget: Option<usize>,
        /// Per object budgets as `OBJECT=N`.
        #[arg(long = "per-object", value_delimiter = ',')]
        per_object: Vec<String>,
        #[arg(long, value_enum, default_value_t = Policy::Every)]
        policy: Policy,
        /// Where to write the saturated document.
        #[arg(long)]
        out: Option<String>,
    },
    /// Extend a filter on the terminal fiber to an ultrafilter.
    Ultrafilter {
        /// A document path or `fixture:NAME`.
        input: String,
        /// A generator, repeatable; defaults to `{⊤}`.
        #[arg(long = "generator")]
        generators: Vec<String>,
    },
    /// Quotient by the filter generated by the given elements of the terminal fiber.
    Quotient {
        /// A document path or `fixture:NAME`.
        input: String,
        /// A generator of the filter, repeatable; element names may contain commas.
        #[arg(long)]
        filter: Vec<String>,
        /// Where to write the quotient document.
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the Henkin model pipeline.
    Model {
        /// A document path or `fixture:NAME`.
        input: String,
        /// Maximum number of Henkin steps; unlimited when omitted.
        #[arg(long)]
        budget: Option<usize>,
        /// Require the elementary model.
        #[arg(long)]
        elementary: bool,
        /// A generator of the ultrafilter, repeatable; omitted or `greedy` extends `{⊤}` greedily.
        #[arg(long)]
        filter: Vec<String>,
        /// Where to write the model document.
        #[arg(long)]
        out: Option<String>,
    },
    /// Build a chain by applying steps and compute its colimit.
    Colimit {
        /// A document path or `fixture:NAME`.
        input: String,
        /// `relabel:SUFFIX`, `add-axiom:φ`, `add-constant:X` or `henkin:B:φ`, applied in order.
        #[arg(long = "step", required = true)]
        steps: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construction {
    /// Add a generic constant of sort `object`.
    AddConstant { object: String },
    /// Add an axiom from the terminal fiber.
    AddAxiom { element: String },
    /// One Henkin step for `element` over `object`.
    Henkin { object: String, element: String },
    /// The ¬¬-closed fragment.
    Notnot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Every,
    Unwitnessed,
}

/// Parses `args` (program name first), runs the command and writes the report to `out`.
/// Usage errors go to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let started = Instant::now();
    match commands::execute(&cli.command, Report::new(echo)) {
        Ok(mut report) => {
            report.elapsed = Some(started.elapsed());
            let text = match cli.format {
                Format::Text => report.render_text(),
                Format::Structured => report.render_structured(),
            };
            let _ = out.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
