use std::fmt::Write;
use std::path::PathBuf;

use anyhow::Result;
use avoidance::estimator::{run_experiment, ExperimentPlan, ExponentEstimate};
use avoidance::game::GameConfig;
use serde::Serialize;

use super::simulate::StrategyArgs;
use crate::input;
use crate::session::{Outcome, Session};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long = "F", value_name = "GRAPH")]
    f: String,
    #[arg(long)]
    r: u8,
    #[command(flatten)]
    strategy: StrategyArgs,
    /// Comma-separated vertex counts.
    #[arg(long, default_value = "64,128,256,512")]
    grid: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Cap on total simulated work, in board operations.
    #[arg(long)]
    budget: Option<f64>,
    /// Writes the per-trial table: n, trial, seed, duration, survived.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Report {
    trials_per_n: usize,
    estimate: ExponentEstimate,
    theoretical_f64: f64,
}

pub fn run(s: &mut Session, a: Args) -> Result<Outcome> {
    let seed = s.seed("estimate")?;
    let mut template = GameConfig::new(0, input::graph(&a.f)?, a.r, 0);
    template.strategy = a.strategy.spec()?;
    let mut plan = ExperimentPlan::new(template, input::usize_list(&a.grid)?, a.trials, seed);
    if let Some(b) = a.budget {
        anyhow::ensure!(b.is_finite() && b > 0.0, "--budget must be positive");
        plan.work_budget = b as u64;
    }
    let (estimate, trials) = run_experiment(&plan)?;
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        for t in &trials {
            w.serialize(t)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        s.write_file(path, &bytes)?;
    }
    let report = Report {
        trials_per_n: a.trials,
        theoretical_f64: estimate.theoretical.to_f64(),
        estimate,
    };
    s.emit("estimate", &report, || {
        let e = &report.estimate;
        let mut out = String::new();
        for (n, med) in &e.medians {
            let _ = writeln!(out, "n = {n}: median duration {med}");
        }
        let se = e.stderr.map_or("n/a".to_string(), |x| format!("{x:.4}"));
        let _ = writeln!(
            out,
            "slope = {:.4} (stderr {se}), intercept = {:.4}",
            e.slope, e.intercept
        );
        let _ = writeln!(out, "theoretical = {} ({:.4})", e.theoretical, report.theoretical_f64);
        out
    })?;
    Ok(Outcome::Pass)
}
