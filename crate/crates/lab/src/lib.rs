//! Batch front-end for the weighted isoperimetric lab: file formats,
//! configuration and the `weiso` command runner.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod io;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{Format, Resolved};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "WISO_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "weiso", version, about = "Weighted isoperimetric laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Constants,
    Measure,
    Perimeter,
    Quotient,
    Rearrange,
    VerifyIsoperimetric,
    VerifyHl,
    VerifyGauss,
    VerifyPs,
    Poincare,
    Solve,
    Compare,
    Sweep,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// kappa, C^rad and exponents for given (N, k, l, alpha)
    Constants(Flags),
    /// Weighted measure of a star-shaped set
    Measure(Flags),
    /// Weighted perimeter of a star-shaped set
    Perimeter(Flags),
    /// Isoperimetric quotient R of a set, or Q of a mesh function
    Quotient(Flags),
    /// Decreasing rearrangement and norms of a mesh function
    Rearrange(Flags),
    /// Check R >= C^rad over half-balls and random star-shaped sets
    VerifyIsoperimetric(Flags),
    /// Check the measure-ratio inequality between exponents l > l'
    VerifyHl(Flags),
    /// Check (l+N+alpha) mu_l <= P_{l+1}
    VerifyGauss(Flags),
    /// Check the Dirichlet energy does not grow under symmetrization
    VerifyPs(Flags),
    /// Best weighted Poincare constant on a half-ball
    Poincare(Flags),
    /// Solve the degenerate elliptic problem
    Solve(Flags),
    /// Compare the symmetrized solution with the radial solution
    Compare(Flags),
    /// Isoperimetric verification over a grid of parameters
    Sweep(Flags),
}

impl Command {
    fn split(self) -> (CommandKind, Flags) {
        use Command as C;
        use CommandKind as K;
        match self {
            C::Constants(f) => (K::Constants, f),
            C::Measure(f) => (K::Measure, f),
            C::Perimeter(f) => (K::Perimeter, f),
            C::Quotient(f) => (K::Quotient, f),
            C::Rearrange(f) => (K::Rearrange, f),
            C::VerifyIsoperimetric(f) => (K::VerifyIsoperimetric, f),
            C::VerifyHl(f) => (K::VerifyHl, f),
            C::VerifyGauss(f) => (K::VerifyGauss, f),
            C::VerifyPs(f) => (K::VerifyPs, f),
            C::Poincare(f) => (K::Poincare, f),
            C::Solve(f) => (K::Solve, f),
            C::Compare(f) => (K::Compare, f),
            C::Sweep(f) => (K::Sweep, f),
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
struct Flags {
    /// Dimension N
    #[arg(long = "N")]
    dim: Option<usize>,
    /// Perimeter exponent k
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Measure exponent l
    #[arg(long, allow_hyphen_values = true)]
    l: Option<f64>,
    /// Exponent of x_N
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Second measure exponent for verify-hl
    #[arg(long = "l-prime", allow_hyphen_values = true)]
    l_prime: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random cases
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Directory for report files; reports go to stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key = value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (default from WISO_THREADS, else all cores)
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Target mesh size for generated meshes
    #[arg(long)]
    h: Option<f64>,
    /// Half-ball or half-disc radius
    #[arg(long)]
    radius: Option<f64>,
    /// Star-profile file
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Mesh file, with VALUES for commands that take a function
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Problem file for solve and compare
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Built-in test function on the half-disc
    #[arg(long)]
    function: Option<String>,
    /// Built-in right-hand side for the half-disc benchmark
    #[arg(long)]
    rhs: Option<String>,
}

impl Flags {
    fn into_resolved(self) -> (Resolved, Option<PathBuf>) {
        let r = Resolved {
            dim: self.dim,
            k: self.k,
            l: self.l,
            alpha: self.alpha,
            l_prime: self.l_prime,
            seed: self.seed,
            samples: self.samples,
            tolerance: self.tolerance,
            h: self.h,
            radius: self.radius,
            profile: self.profile,
            mesh: self.mesh,
            problem: self.problem,
            function: self.function,
            rhs: self.rhs,
            format: self.format,
            out: self.out,
            threads: self.threads,
        };
        (r, self.config)
    }
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Constants => "constants",
            CommandKind::Measure => "measure",
            CommandKind::Perimeter => "perimeter",
            CommandKind::Quotient => "quotient",
            CommandKind::Rearrange => "rearrange",
            CommandKind::VerifyIsoperimetric => "verify-isoperimetric",
            CommandKind::VerifyHl => "verify-hl",
            CommandKind::VerifyGauss => "verify-gauss",
            CommandKind::VerifyPs => "verify-ps",
            CommandKind::Poincare => "poincare",
            CommandKind::Solve => "solve",
            CommandKind::Compare => "compare",
            CommandKind::Sweep => "sweep",
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code: 0 on success, 1 when a verification fails, 2 on usage or
/// input errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let target: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (kind, flags) = cli.command.split();
    let (mut resolved, config) = flags.into_resolved();
    if let Some(path) = config {
        let loaded = std::fs::read_to_string(&path)
            .map_err(|e| format!("{}: {e}", path.display()))
            .and_then(|text| {
                let cfg = config::parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
                resolved.fill_from(&cfg).map_err(|e| format!("{}: {e}", path.display()))
            });
        if let Err(msg) = loaded {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    }
    if resolved.threads.is_none() {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            match v.trim().parse() {
                Ok(n) => resolved.threads = Some(n),
                Err(_) => {
                    let _ = writeln!(stderr, "error: {THREADS_ENV} must be a positive integer, got '{v}'");
                    return EXIT_USAGE;
                }
            }
        }
    }
    match commands::execute(kind, &resolved) {
        Ok(outcome) => match emit(kind, &resolved, &outcome, stdout) {
            Ok(()) => {
                if outcome.passed {
                    EXIT_OK
                } else {
                    let _ = writeln!(stderr, "{}: verification failed", kind.name());
                    EXIT_VERIFICATION_FAILED
                }
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(kind: CommandKind, r: &Resolved, outcome: &commands::Outcome, stdout: &mut dyn Write) -> std::io::Result<()> {
    let format = r.format.unwrap_or(Format::Json);
    let (body, ext) = match format {
        Format::Json => (&outcome.json, "json"),
        Format::Csv => (&outcome.csv, "csv"),
    };
    match &r.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("{}.{ext}", kind.name()));
            std::fs::write(&path, body)?;
            writeln!(stdout, "{}", path.display())
        }
        None => stdout.write_all(body.as_bytes()),
    }
}
