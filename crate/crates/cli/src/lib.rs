//! Command-line front end for the two-way Gaussian interference channel
//! toolkit: single-point evaluation, grid sweeps with CSV/JSON output,
//! gap-table verification, and the numerical oracles.

pub mod args;
pub mod commands;
pub mod output;

use std::io::Write;

use args::{Cli, Command};

/// Environment variable capping the rayon worker count.
pub const THREADS_ENV: &str = "TWOWAY_IC_THREADS";

/// Builds the global thread pool from [`THREADS_ENV`] if set. Must run
/// before any parallel work.
pub fn init_thread_pool() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("{THREADS_ENV}=`{raw}` must be a positive integer"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("thread pool init failed: {e}"))
}

/// Dispatches a parsed command line, writing to `out`. Returns the exit code
/// (0 ok, 2 verification failure) or a [`commands::CmdError`] (usage errors
/// exit 1).
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<i32, commands::CmdError> {
    match &cli.command {
        Command::Bounds(args) => commands::run_bounds(args, out),
        Command::Sweep(args) => commands::run_sweep(args, out),
        Command::VerifyGaps(args) => commands::run_verify_gaps(args, out),
        Command::Oracle(cmd) => commands::run_oracle(cmd, out),
    }
}
