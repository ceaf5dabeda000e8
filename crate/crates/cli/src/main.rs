//! `degflag`: cells, characters, the smallness census and property checks
//! for type A degenerate flag varieties.

mod cells;
mod character;
mod output;
mod semismall;
mod verify;

use anyhow::Result;
use clap::{Parser, Subcommand};
use degflag_core::Error as CoreError;
use output::Format;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "degflag", version, about = "Degenerate flag varieties: cells, q-characters, smallness")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads.
    #[arg(long, env = "DEGFLAG_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cells of R_n (or R_d) with dimensions and the Poincare polynomial.
    Cells(cells::CellsArgs),
    /// PBW-graded character of V_lambda from the fixed-point sum.
    Character(character::CharacterArgs),
    /// Smallness / semismallness of R_n -> Fl^a_n.
    Semismall(semismall::SemismallArgs),
    /// Randomised and exhaustive invariant checks.
    Verify(verify::VerifyArgs),
}

/// Exit status of a finished command: output was written, checks may have failed.
pub enum Outcome {
    Ok,
    CheckFailed,
}

pub const EXIT_CHECK: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<CoreError>() {
        Some(CoreError::Capacity(_)) => EXIT_CAPACITY,
        Some(CoreError::Internal(_)) => EXIT_CHECK,
        Some(_) => EXIT_USAGE,
        None => match e.downcast_ref::<output::UsageError>() {
            Some(_) => EXIT_USAGE,
            None => EXIT_CHECK,
        },
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let threads = cli.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| {
        let mut out = std::io::stdout().lock();
        match cli.command {
            Command::Cells(a) => cells::run(&a, cli.format, &mut out),
            Command::Character(a) => character::run(&a, cli.format, &mut out),
            Command::Semismall(a) => semismall::run(&a, threads, cli.format, &mut out),
            Command::Verify(a) => verify::run(&a, cli.format, &mut out),
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(EXIT_CHECK),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
