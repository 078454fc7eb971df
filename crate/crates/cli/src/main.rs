//! `sig3` — command-line front end for the signature-three elliptic
//! function library.
//!
//! Exit codes: 0 success (including an evaluation that lands on a pole),
//! 1 verification failure or runtime error, 2 usage error (bad flags,
//! malformed numbers, out-of-range modulus).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use sig3_cli::commands;
use sig3_cli::parse::{self, Format, FunctionKind, Grid};
use sig3_cli::report::run_verification;

#[derive(Parser)]
#[command(name = "sig3", version, about = "Signature-three elliptic function toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full self-verification suite at one modulus
    Verify {
        /// Modulus kappa, strictly between 0 and 1
        #[arg(long, value_parser = parse::parse_kappa)]
        kappa: f64,
        /// Residual tolerance; defaults to the SIG3_TOL environment
        /// variable, or 1e-8 when that is unset
        #[arg(long, value_parser = parse::parse_tolerance)]
        tol: Option<f64>,
    },
    /// Tabulate periods and lattice ratios over a modulus grid
    Periods {
        /// Grid as start:stop:step (inclusive), or a single modulus
        #[arg(long, value_parser = parse::parse_grid)]
        grid: Grid,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate one function at one complex point
    Eval {
        /// Function name: dn3, W, y6sq, p, or P (case-sensitive)
        #[arg(value_parser = parse::parse_function)]
        function: FunctionKind,
        /// Modulus kappa, strictly between 0 and 1
        #[arg(long, value_parser = parse::parse_kappa)]
        kappa: f64,
        /// Evaluation point, e.g. 0.3, 2i, or 0.25-0.75i
        #[arg(long, value_parser = parse::parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Sample one function along a segment and write a table to a file
    Sample {
        /// Function name: dn3, W, y6sq, p, or P (case-sensitive)
        #[arg(value_parser = parse::parse_function)]
        function: FunctionKind,
        /// Modulus kappa, strictly between 0 and 1
        #[arg(long, value_parser = parse::parse_kappa)]
        kappa: f64,
        /// Segment start
        #[arg(long, value_parser = parse::parse_complex, allow_hyphen_values = true)]
        from: Complex64,
        /// Segment end
        #[arg(long, value_parser = parse::parse_complex, allow_hyphen_values = true)]
        to: Complex64,
        /// Number of equally spaced samples, at least 2
        #[arg(long, value_parser = parse::parse_count)]
        n: usize,
        /// Output file path
        #[arg(long)]
        out: PathBuf,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Verify { kappa, tol } => {
            let tol = match tol.map(Ok).unwrap_or_else(default_tolerance) {
                Ok(t) => t,
                Err(message) => {
                    eprintln!("error: {message}");
                    return Ok(ExitCode::from(2));
                }
            };
            let report = run_verification(kappa, tol);
            print!("{}", commands::render_report(&report));
            Ok(if report.overall {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Periods { grid, format } => {
            print!("{}", commands::periods_table(&grid.0, format)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { function, kappa, z } => {
            println!("{}", commands::eval_point(function, kappa, z)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample {
            function,
            kappa,
            from,
            to,
            n,
            out,
            format,
        } => {
            let table = commands::sample_table(function, kappa, from, to, n, format)?;
            std::fs::write(&out, table)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Tolerance when --tol is absent: the SIG3_TOL environment variable if
/// set (and valid), else 1e-8.
fn default_tolerance() -> Result<f64, String> {
    match std::env::var("SIG3_TOL") {
        Ok(text) => parse::parse_tolerance(&text).map_err(|e| format!("SIG3_TOL: {e}")),
        Err(std::env::VarError::NotPresent) => Ok(1e-8),
        Err(e) => Err(format!("SIG3_TOL: {e}")),
    }
}
