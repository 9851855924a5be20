//! `tanglie` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on input
//! errors (unreadable or invalid problem file, bad expression, bad flag).

mod commands;
mod report;

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use tanglie_core::problem::{catalog_algebra, load_problem, Problem, ProblemError, ProblemFile};

pub use report::{Check, Item, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tanglie",
    version,
    about = "Lifted left-invariant metrics on tangent Lie algebras"
)]
pub struct Cli {
    /// Check tolerance.
    #[arg(long, global = true, default_value_t = tanglie_core::tol::CHECK)]
    pub tol: f64,

    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Koszul,
    Closed,
    Structconst,
}

#[derive(Debug, Clone, clap::Args)]
pub struct MetricPair {
    /// Metric used for complete lifts.
    #[arg(long, default_value = "g1")]
    pub g1: String,
    /// Metric used for vertical lifts.
    #[arg(long, default_value = "g2")]
    pub g2: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jacobi, metric validity, bi-invariance and double-bracket residuals.
    Check {
        file: String,
        #[command(flatten)]
        pair: MetricPair,
    },
    /// Christoffel symbols of a base metric or of the lift.
    Connection {
        file: String,
        /// A metric name from the file, or `lift`.
        #[arg(long, default_value = "lift")]
        metric: String,
        #[arg(long, value_enum, default_value_t = Method::Koszul)]
        method: Method,
        #[command(flatten)]
        pair: MetricPair,
    },
    /// Curvature tensor of a base metric or of the lift.
    Curvature {
        file: String,
        #[arg(long, default_value = "lift")]
        metric: String,
        /// Per-block comparison with the structure-constant formulas (lift only).
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        pair: MetricPair,
    },
    /// Sectional curvature of the plane spanned by two vectors.
    Sectional {
        file: String,
        /// Two comma-separated expressions, e.g. "Y^v,Z^v" (lifted) or "X,Y" (base).
        #[arg(long, allow_hyphen_values = true)]
        plane: String,
        #[command(flatten)]
        pair: MetricPair,
    },
    /// Writes the tangent algebra as a problem file.
    Lift {
        file: String,
        /// Write the document here and print a report instead.
        #[arg(long)]
        output: Option<String>,
        #[command(flatten)]
        pair: MetricPair,
    },
    /// Killing, conformal and geodesic classification of a vector.
    Field {
        file: String,
        /// Lifted ("Z^v") or base ("Z") expression.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[command(flatten)]
        pair: MetricPair,
    },
    /// Equivariance of connection and curvature under an automorphism.
    Equiv {
        file: String,
        #[arg(long)]
        tau: String,
        /// Second automorphism, acting on vertical lifts; enables the lifted check.
        #[arg(long)]
        tau2: Option<String>,
        #[command(flatten)]
        pair: MetricPair,
    },
    /// Lifts a pair of symplectic forms and checks closedness and nondegeneracy.
    Symplectic {
        file: String,
        #[arg(long, default_value = "w1")]
        w1: String,
        #[arg(long, default_value = "w2")]
        w2: String,
        #[command(flatten)]
        pair: MetricPair,
    },
}

/// Input-side failure: reported on stderr, exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

/// What a command produced: a report, or a raw document for stdout.
pub enum Output {
    Report(Report),
    Document { text: String, report: Report },
}

/// A loaded problem with the identity used in reports.
pub struct Input {
    pub problem: Problem,
    pub source: String,
    pub digest: String,
}

/// Resolves `<file>`: an existing path is loaded, otherwise a catalog name.
pub fn resolve_input(arg: &str) -> Result<Input, ProblemError> {
    let path = Path::new(arg);
    if path.exists() {
        let bytes = std::fs::read(path).map_err(|e| ProblemError::Io {
            path: arg.to_string(),
            message: e.to_string(),
        })?;
        let problem = load_problem(path)?;
        return Ok(Input {
            problem,
            source: arg.to_string(),
            digest: sha256_hex(&bytes),
        });
    }
    let file: ProblemFile = catalog_algebra(arg)?;
    let digest = sha256_hex(file.to_json().as_bytes());
    Ok(Input {
        problem: file.validate()?,
        source: format!("catalog:{arg}"),
        digest,
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Parses `args` (without the program name), runs the command and writes the
/// report to `out`, diagnostics to `err`. Returns the exit code.
pub fn run_command<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(
        std::iter::once("tanglie".to_string()).chain(args.iter().cloned()),
    ) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        let _ = writeln!(err, "error: --tol must be a non-negative number");
        return EXIT_INPUT;
    }
    let echo = args.join(" ");
    match commands::execute(&cli, echo) {
        Ok(Output::Report(r)) => emit(&r, cli.json, out),
        Ok(Output::Document { text, report }) => {
            let _ = write!(out, "{text}");
            if !report.passed() {
                let _ = write!(err, "{}", report.to_text());
            }
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn emit(r: &Report, json: bool, out: &mut dyn Write) -> i32 {
    let text = if json { r.to_json() } else { r.to_text() };
    let _ = write!(out, "{text}");
    if r.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
