//! Monte Carlo threshold-exponent estimation and survival curves.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::threshold_exponent;
use crate::error::{Error, Result};
use crate::game::{pairs, play, GameConfig};
use crate::rational::XRational;

/// Default cap on `Σ trials · C(n,2)` edge rounds.
pub const DEFAULT_WORK_BUDGET: u64 = 20_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    /// `n`, `max_rounds` and `seed` are overridden per trial.
    pub template: GameConfig,
    pub n_grid: Vec<usize>,
    pub trials_per_n: usize,
    pub seed_root: u64,
    pub work_budget: u64,
}

impl ExperimentPlan {
    pub fn new(template: GameConfig, n_grid: Vec<usize>, trials_per_n: usize, seed_root: u64) -> ExperimentPlan {
        ExperimentPlan {
            template,
            n_grid,
            trials_per_n,
            seed_root,
            work_budget: DEFAULT_WORK_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_grid.len() < 2 {
            return Err(Error::DegenerateGrid(format!(
                "{} grid point(s), need 2",
                self.n_grid.len()
            )));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DegenerateGrid("grid must be strictly increasing".into()));
        }
        if self.n_grid[0] < 2 {
            return Err(Error::DegenerateGrid("grid points must be at least 2".into()));
        }
        if self.trials_per_n == 0 {
            return Err(Error::Parameter("trials_per_n must be at least 1".into()));
        }
        let work = self.n_grid.iter().try_fold(0u64, |acc, &n| {
            acc.checked_add(pairs(n).checked_mul(self.trials_per_n as u64)?)
        });
        match work {
            Some(w) if w <= self.work_budget => Ok(()),
            _ => Err(Error::Budget {
                what: "experiment",
                detail: format!("worst case exceeds {} edge rounds", self.work_budget),
            }),
        }
    }

    fn trial_config(&self, n: usize, trial: usize, max_rounds: u64) -> GameConfig {
        let mut cfg = self.template.clone();
        cfg.n = n;
        cfg.max_rounds = max_rounds;
        cfg.seed = trial_seed(self.seed_root, n, trial);
        cfg.record_transcript = false;
        cfg
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at board size `n`: chained SplitMix64 finalizers.
pub fn trial_seed(seed_root: u64, n: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed_root) ^ n as u64) ^ trial as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub duration: u64,
    pub survived: bool,
}

/// Outcome of one trial as reported by a runner: `(duration, survived)`.
pub type TrialOutcome = (u64, bool);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    /// `(n, median duration)` per grid point.
    pub medians: Vec<(usize, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// `None` with only two grid points.
    pub stderr: Option<f64>,
    pub theoretical: XRational,
}

/// Runs every trial of `plan` through `runner`, sorted by `(n, trial)`.
pub fn run_trials_with<R>(plan: &ExperimentPlan, runner: R) -> Result<Vec<TrialResult>>
where
    R: Fn(&GameConfig) -> Result<TrialOutcome> + Sync,
{
    plan.validate()?;
    let jobs: Vec<(usize, usize)> = plan
        .n_grid
        .iter()
        .flat_map(|&n| (0..plan.trials_per_n).map(move |t| (n, t)))
        .collect();
    let mut out = jobs
        .into_par_iter()
        .map(|(n, trial)| {
            let cfg = plan.trial_config(n, trial, pairs(n));
            let (duration, survived) = runner(&cfg)?;
            Ok(TrialResult {
                n,
                trial,
                seed: cfg.seed,
                duration,
                survived,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|t| (t.n, t.trial));
    Ok(out)
}

pub fn run_trials(plan: &ExperimentPlan) -> Result<Vec<TrialResult>> {
    run_trials_with(plan, game_runner)
}

fn game_runner(cfg: &GameConfig) -> Result<TrialOutcome> {
    let rec = play(cfg)?;
    Ok((rec.duration, rec.survived))
}

pub fn run_experiment(plan: &ExperimentPlan) -> Result<(ExponentEstimate, Vec<TrialResult>)> {
    let trials = run_trials(plan)?;
    let est = estimate(plan, &trials)?;
    Ok((est, trials))
}

/// Regresses ln(median duration) on ln n over the plan's grid.
pub fn estimate(plan: &ExperimentPlan, trials: &[TrialResult]) -> Result<ExponentEstimate> {
    let theoretical = threshold_exponent(&plan.template.f, plan.template.r as u32)?;
    let mut medians = Vec::with_capacity(plan.n_grid.len());
    for &n in &plan.n_grid {
        let mut d: Vec<u64> = trials.iter().filter(|t| t.n == n).map(|t| t.duration).collect();
        if d.is_empty() {
            return Err(Error::DegenerateGrid(format!("no trials at n = {n}")));
        }
        let med = median(&mut d);
        if med <= 0.0 {
            return Err(Error::DegenerateGrid(format!("median duration at n = {n} is zero")));
        }
        medians.push((n, med));
    }
    let xs: Vec<f64> = medians.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = medians.iter().map(|&(_, m)| m.ln()).collect();
    let fit = least_squares(&xs, &ys)?;
    Ok(ExponentEstimate {
        medians,
        slope: fit.slope,
        intercept: fit.intercept,
        stderr: fit.stderr,
        theoretical,
    })
}

pub fn median(values: &mut [u64]) -> f64 {
    values.sort_unstable();
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2] as f64
    } else {
        (values[k / 2 - 1] as f64 + values[k / 2] as f64) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: Option<f64>,
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let k = xs.len();
    if k < 2 || ys.len() != k {
        return Err(Error::DegenerateGrid("need at least two paired points".into()));
    }
    let mx = xs.iter().sum::<f64>() / k as f64;
    let my = ys.iter().sum::<f64>() / k as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateGrid("all abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = (k > 2).then(|| {
        let ssr: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (ssr / (k - 2) as f64 / sxx).sqrt()
    });
    if !slope.is_finite() {
        return Err(Error::DegenerateGrid("non-finite slope".into()));
    }
    Ok(LineFit {
        slope,
        intercept,
        stderr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalPoint {
    pub rounds: u64,
    pub survival: f64,
}

/// Survival fractions at each `N` in `rounds`, on one shared trial set.
///
/// Each trial is played once up to `max(rounds)`; a trial survives `N` iff it
/// survived outright or lost strictly after round `N`.
pub fn survival_curve(
    template: &GameConfig,
    n: usize,
    rounds: &[u64],
    trials: usize,
    seed_root: u64,
) -> Result<Vec<SurvivalPoint>> {
    survival_curve_with(template, n, rounds, trials, seed_root, DEFAULT_WORK_BUDGET, game_runner)
}

pub fn survival_curve_with<R>(
    template: &GameConfig,
    n: usize,
    rounds: &[u64],
    trials: usize,
    seed_root: u64,
    work_budget: u64,
    runner: R,
) -> Result<Vec<SurvivalPoint>>
where
    R: Fn(&GameConfig) -> Result<TrialOutcome> + Sync,
{
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let cap = rounds.iter().copied().max().unwrap_or(0);
    if cap > pairs(n) {
        return Err(Error::Parameter(format!("N = {cap} exceeds C({n},2) = {}", pairs(n))));
    }
    if cap.checked_mul(trials as u64).is_none_or(|w| w > work_budget) {
        return Err(Error::Budget {
            what: "survival curve",
            detail: format!("worst case exceeds {work_budget} edge rounds"),
        });
    }
    let plan = ExperimentPlan {
        template: template.clone(),
        n_grid: vec![n],
        trials_per_n: trials,
        seed_root,
        work_budget,
    };
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| runner(&plan.trial_config(n, t, cap)))
        .collect::<Result<Vec<_>>>()?;
    Ok(rounds
        .iter()
        .map(|&big_n| {
            let alive = outcomes.iter().filter(|&&(d, s)| s || d > big_n).count();
            SurvivalPoint {
                rounds: big_n,
                survival: alive as f64 / trials as f64,
            }
        })
        .collect())
}
