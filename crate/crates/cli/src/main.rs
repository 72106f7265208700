//! `avoidance`: exact densities, 𝓕ᵏ constructions, game simulation, exponent
//! estimation, regularity checks and lemma verification.

mod commands;
mod input;
mod session;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use session::{Outcome, Session};

#[derive(Debug, Parser)]
#[command(name = "avoidance", version, about = "Online F-avoidance game toolkit")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Emit JSON, to stdout without a value or to PATH.
    #[arg(long, global = true, num_args = 0..=1, value_name = "PATH")]
    json: Option<Option<PathBuf>>,

    /// Seed for randomized commands; required by all of them.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Where to write the run manifest; stderr when absent.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact densities and the threshold exponent of a graph.
    Density(commands::density::Args),
    /// Enumerate the classes 𝓕ᵏ of a rooted pattern.
    Construct(commands::construct::Args),
    /// Play one seeded game.
    Simulate(commands::simulate::Args),
    /// Monte Carlo estimate of the duration exponent.
    Estimate(commands::estimate::Args),
    /// Regularity, extensibility and co-degree checks.
    Regcheck(commands::regcheck::Args),
    /// Exhaustive exact verification of the density lemmas.
    Verify(commands::verify::Args),
}

fn run(cli: Cli, argv: Vec<String>) -> anyhow::Result<Outcome> {
    if let Some(jobs) = cli.jobs {
        anyhow::ensure!(jobs > 0, "--jobs must be positive");
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let mut s = Session::new(argv, cli.json, cli.seed, cli.jobs);
    let outcome = match cli.command {
        Command::Density(a) => commands::density::run(&mut s, a),
        Command::Construct(a) => commands::construct::run(&mut s, a),
        Command::Simulate(a) => commands::simulate::run(&mut s, a),
        Command::Estimate(a) => commands::estimate::run(&mut s, a),
        Command::Regcheck(a) => commands::regcheck::run(&mut s, a),
        Command::Verify(a) => commands::verify::run(&mut s, a),
    }?;
    s.finish(outcome, cli.manifest.as_deref())?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli, argv) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
