//! Command-line driver: check signature files, normalize terms, decide
//! equalities.
//!
//! Exit codes are a stable contract: 0 success, 1 semantic failure,
//! 2 parse or resolution error, 3 I/O failure, 4 fuel exhaustion,
//! 5 engine divergence.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod driver;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEMANTIC: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_FUEL: i32 = 4;
pub const EXIT_DIVERGENCE: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "cmtt", version, about = "Type checker for an LF-style calculus with first-class meta-variables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse, resolve and check every declaration and directive in a file.
    Check {
        path: PathBuf,
        /// Step budget per declaration or directive (default 10^6, or
        /// CMTT_FUEL).
        #[arg(long)]
        fuel: Option<u64>,
        /// Machine-readable report on stdout.
        #[arg(long)]
        json: bool,
        /// Print the judgment trace on failure.
        #[arg(long)]
        trace: bool,
        /// Report expression allocations.
        #[arg(long)]
        stats: bool,
        /// Cross-check #eq directives against the eager oracle.
        #[arg(long)]
        oracle: bool,
        /// Check declarations with this many worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Normalize a term in the context of a checked signature file.
    Nf {
        path: PathBuf,
        term: String,
        #[arg(long)]
        fuel: Option<u64>,
        /// Normalize with the eager oracle instead of the lazy engine.
        #[arg(long)]
        oracle: bool,
        /// With --oracle: run both engines and compare.
        #[arg(long)]
        diff: bool,
        /// Report expression allocations of the normalization.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        trace: bool,
    },
    /// Decide equality of two terms checked at a common type.
    Eq {
        path: PathBuf,
        term1: String,
        term2: String,
        /// The type both terms must check against.
        #[arg(long)]
        at: String,
        #[arg(long)]
        fuel: Option<u64>,
        /// Cross-check with the eager oracle; disagreement exits 5.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        trace: bool,
    },
}

/// Resolve the fuel budget: flag, then CMTT_FUEL, then the default.
pub fn effective_fuel(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("CMTT_FUEL")
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
    })
    .unwrap_or(cmtt_core::DEFAULT_FUEL)
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match &cli.command {
        Command::Check {
            path,
            fuel,
            json,
            trace,
            stats,
            oracle,
            jobs,
        } => driver::cmd_check(
            path,
            &driver::CheckOpts {
                fuel: effective_fuel(*fuel),
                json: *json,
                trace: *trace,
                stats: *stats,
                oracle: *oracle,
                jobs: (*jobs).max(1),
            },
            out,
            err,
        ),
        Command::Nf {
            path,
            term,
            fuel,
            oracle,
            diff,
            stats,
            json,
            trace,
        } => driver::cmd_nf(
            path,
            term,
            &driver::NfOpts {
                fuel: effective_fuel(*fuel),
                oracle: *oracle,
                diff: *diff,
                stats: *stats,
                json: *json,
                trace: *trace,
            },
            out,
            err,
        ),
        Command::Eq {
            path,
            term1,
            term2,
            at,
            fuel,
            oracle,
            json,
            trace,
        } => driver::cmd_eq(
            path,
            term1,
            term2,
            at,
            &driver::EqOpts {
                fuel: effective_fuel(*fuel),
                oracle: *oracle,
                json: *json,
                trace: *trace,
            },
            out,
            err,
        ),
    }
}
