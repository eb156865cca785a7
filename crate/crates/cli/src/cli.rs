use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{CliResult, Exit};
use crate::jobs::{
    run_job, BennettParams, CarCheckParams, JobCommand, MultiplierParams, NormParams,
    SimilarityParams,
};
use crate::output::{csv_text, json_text, write_file, SCHEMA_VERSION};
use crate::sweep::{load_spec, run_sweep};

/// Seed used when neither `--seed`, `FOGUEL_LAB_SEED` nor a sweep file sets one.
pub const DEFAULT_SEED: u64 = 2002;

/// Numerical experiments on Hankel operators, Schur multipliers and
/// similarity of operator blocks to contractions.
#[derive(Debug, Parser)]
#[command(name = "foguel-lab", version)]
pub struct Cli {
    /// Global RNG seed.
    #[arg(long, global = true, env = "FOGUEL_LAB_SEED")]
    pub seed: Option<u64>,

    /// Directory receiving `<family>.csv` and `<family>.json`.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the canonical anticommutation relations of the Jordan–Wigner generators.
    CarCheck(CarCheckParams),
    /// Operator norm of a truncated Hankel-type matrix.
    Norm(NormParams),
    /// Partial sums of the multiplier summability criterion for a sequence.
    Bennett(BennettParams),
    /// Witness lower bound for the norm of a Schur multiplier section.
    Multiplier(MultiplierParams),
    /// Sylvester residual of the partial similarity for two truncated shifts.
    Similarity(SimilarityParams),
    /// Run a JSON job list.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Path to the sweep file.
    pub spec: PathBuf,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Exit::Success.code(),
                _ => Exit::InvalidArguments.code(),
            };
        }
    };
    match dispatch(cli) {
        Ok(exit) => exit.code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit().code()
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<Exit> {
    let job = match cli.command {
        Command::Sweep(args) => {
            let spec = load_spec(&args.spec)?;
            let seed = cli.seed.or(spec.seed).unwrap_or(DEFAULT_SEED);
            return run_sweep(&spec, seed, &cli.out_dir);
        }
        Command::CarCheck(p) => JobCommand::CarCheck(p),
        Command::Norm(p) => JobCommand::Norm(p),
        Command::Bennett(p) => JobCommand::Bennett(p),
        Command::Multiplier(p) => JobCommand::Multiplier(p),
        Command::Similarity(p) => JobCommand::Similarity(p),
    };
    run_single(&job, cli.seed.unwrap_or(DEFAULT_SEED), &cli.out_dir)
}

fn run_single(job: &JobCommand, seed: u64, out_dir: &Path) -> CliResult<Exit> {
    let out = run_job(job, seed);
    if let Some(m) = &out.message {
        eprintln!("{}: {m}", job.name());
    }
    if out.rows.is_empty() {
        return Ok(out.exit);
    }
    let stem = out.family.stem();
    let csv = csv_text(out.family, &out.rows)?;
    let report = json!({
        "schema": SCHEMA_VERSION,
        "command": job.name(),
        "seed": seed,
        "params": job.params_json(),
        "exit_code": out.exit.code(),
        "result": out.result,
    });
    write_file(out_dir, &format!("{stem}.csv"), &csv)?;
    write_file(out_dir, &format!("{stem}.json"), &json_text(&report)?)?;
    print!("{csv}");
    Ok(out.exit)
}
