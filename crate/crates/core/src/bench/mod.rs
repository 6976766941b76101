//! Experiment harness: repeated seeded runs, success and cost metrics, and
//! CSV/text reporting.

mod report;

use rayon::prelude::*;

pub use report::{
    format_summary, read_stats_csv, trace_rows, write_stats_csv, write_trace_csv, StatsRow,
    TraceRow, STATS_HEADER, TRACE_HEADER,
};

use crate::engine::{run, RunResult, SwarmConfig};
use crate::error::{Error, Result};
use crate::goodness::GoodnessPair;
use crate::problems::{GapMode, ProblemDef, Sense, SuccessCriterion};
use crate::random::derive_seed;

/// Whether goodness `gp` (minimization form) meets `criterion` for `problem`.
pub fn meets(problem: &ProblemDef, criterion: &SuccessCriterion, gp: &GoodnessPair) -> Result<bool> {
    let target = problem.known_best().ok_or_else(|| {
        Error::config(format!("problem `{}` has no known optimum", problem.name()))
    })?;
    if criterion.require_feasible && !gp.is_feasible() {
        return Ok(false);
    }
    let gap = (problem.reported(gp.f_obj) - target).abs();
    let allowed = match criterion.mode {
        GapMode::Absolute => criterion.tolerance,
        GapMode::Relative if target == 0.0 => criterion.absolute_fallback,
        GapMode::Relative => criterion.tolerance * target.abs(),
    };
    Ok(gap <= allowed)
}

/// Success of a finished run, plus the evaluations spent when the criterion
/// first held (`N * t` at cycle granularity).
pub fn success_check(
    run: &RunResult,
    problem: &ProblemDef,
    criterion: &SuccessCriterion,
) -> Result<(bool, Option<u64>)> {
    if !meets(problem, criterion, &run.goodness)? {
        return Ok((false, None));
    }
    for record in &run.history {
        if meets(problem, criterion, &record.best)? {
            return Ok((true, Some(record.cycle as u64 * run.n_agents as u64)));
        }
    }
    Ok((true, Some(run.evaluations)))
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub problem: ProblemDef,
    /// Swarm settings; its `seed` is the master seed of the experiment.
    pub swarm: SwarmConfig,
    pub runs: usize,
    pub criterion: SuccessCriterion,
}

impl ExperimentConfig {
    /// Uses the problem's own success criterion.
    pub fn new(problem: ProblemDef, swarm: SwarmConfig, runs: usize) -> Self {
        let criterion = *problem.criterion();
        Self {
            problem,
            swarm,
            runs,
            criterion,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::config("an experiment needs at least one run"));
        }
        self.criterion.validate()?;
        self.swarm.validate()
    }

    /// Swarm config of run `index`.
    pub fn run_config(&self, index: usize) -> SwarmConfig {
        self.swarm
            .clone()
            .with_seed(derive_seed(self.swarm.seed, index as u64))
    }
}

/// Aggregate statistics over an experiment's runs. Objective statistics use
/// feasible final results only and are in the problem's literature sign.
#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub runs: usize,
    pub mean: Option<f64>,
    pub best: Option<f64>,
    pub worst: Option<f64>,
    pub stddev: Option<f64>,
    pub success_rate: f64,
    /// Mean evaluations to success over successful runs; absent when none
    /// succeeded.
    pub mean_te: Option<f64>,
    pub feasibility_rate: f64,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub stats: RunStats,
    pub runs: Vec<RunResult>,
    pub successes: Vec<(bool, Option<u64>)>,
}

/// Executes `runs` independent runs (in parallel) and aggregates them in run
/// order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment> {
    config.validate()?;
    let runs: Vec<RunResult> = (0..config.runs)
        .into_par_iter()
        .map(|i| run(&config.problem.fresh(), config.run_config(i)))
        .collect::<Result<_>>()?;
    let successes = if config.problem.known_best().is_some() {
        runs.iter()
            .map(|r| success_check(r, &config.problem, &config.criterion))
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![(false, None); runs.len()]
    };
    let stats = aggregate(&config.problem, &runs, &successes);
    Ok(Experiment {
        stats,
        runs,
        successes,
    })
}

/// Reduces per-run results (in run order) to [`RunStats`].
pub fn aggregate(
    problem: &ProblemDef,
    runs: &[RunResult],
    successes: &[(bool, Option<u64>)],
) -> RunStats {
    let n = runs.len();
    let finals: Vec<f64> = runs
        .iter()
        .filter(|r| r.is_feasible())
        .map(|r| r.objective)
        .collect();
    let k = finals.len();
    let (mean, best, worst, stddev) = if k == 0 {
        (None, None, None, None)
    } else {
        let mean = finals.iter().sum::<f64>() / k as f64;
        let var = if k > 1 {
            finals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64
        } else {
            0.0
        };
        let lo = finals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (best, worst) = match problem.sense() {
            Sense::Minimize => (lo, hi),
            Sense::Maximize => (hi, lo),
        };
        (Some(mean), Some(best), Some(worst), Some(var.sqrt()))
    };
    let te: Vec<u64> = successes
        .iter()
        .filter(|(ok, _)| *ok)
        .filter_map(|(_, te)| *te)
        .collect();
    let n_success = successes.iter().filter(|(ok, _)| *ok).count();
    RunStats {
        runs: n,
        mean,
        best,
        worst,
        stddev,
        success_rate: if n == 0 { 0.0 } else { n_success as f64 / n as f64 },
        mean_te: (!te.is_empty()).then(|| te.iter().sum::<u64>() as f64 / te.len() as f64),
        feasibility_rate: if n == 0 { 0.0 } else { k as f64 / n as f64 },
    }
}
