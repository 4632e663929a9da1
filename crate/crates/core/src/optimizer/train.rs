use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::crs::crs_stage;
use super::local::local_stage;
use super::{BoundedProblem, OptimizerConfig};
use crate::{Error, Result};

/// Objective values above this (or non-finite) are replaced by it.
const COST_CEILING: f64 = 1e10;

/// A new best cost and the evaluation that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluation: usize,
    pub cost: f64,
}

/// Outcome of one restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainRecord {
    /// Master seed; the run's generator is this seed on stream `run`.
    pub seed: u64,
    pub run: usize,
    pub best_cost: f64,
    pub best_params: Vec<f64>,
    pub evaluations: usize,
    pub global_evaluations: usize,
    pub local_evaluations: usize,
    pub global_iterations: usize,
    pub local_iterations: usize,
    pub global_budget_exhausted: bool,
    pub local_budget_exhausted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_failure: Option<String>,
    pub budget: usize,
    pub tol_global: f64,
    pub tol_local: f64,
    pub trace: Vec<TracePoint>,
}

/// All restarts and the index of the best one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainOutcome {
    pub records: Vec<TrainRecord>,
    pub best: usize,
}

impl TrainOutcome {
    pub fn best_record(&self) -> &TrainRecord {
        &self.records[self.best]
    }

    pub fn best_cost(&self) -> f64 {
        self.best_record().best_cost
    }
}

/// Clamped, counted objective access with a best-so-far trace.
pub(crate) struct Tracker<'p, 'a> {
    problem: &'p BoundedProblem<'a>,
    evaluations: usize,
    best: f64,
    best_x: Vec<f64>,
    trace: Vec<TracePoint>,
    buf: Vec<f64>,
}

impl<'p, 'a> Tracker<'p, 'a> {
    pub(crate) fn new(problem: &'p BoundedProblem<'a>) -> Self {
        Tracker {
            problem,
            evaluations: 0,
            best: f64::INFINITY,
            best_x: Vec::new(),
            trace: Vec::new(),
            buf: vec![0.0; problem.dim()],
        }
    }

    pub(crate) fn problem(&self) -> &'p BoundedProblem<'a> {
        self.problem
    }

    pub(crate) fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub(crate) fn best(&self) -> (f64, &[f64]) {
        (self.best, &self.best_x)
    }

    /// Evaluate at `x` projected onto the bound box.
    pub(crate) fn eval(&mut self, x: &[f64]) -> f64 {
        self.buf.copy_from_slice(x);
        self.problem.clamp_into(&mut self.buf);
        let raw = self.problem.evaluate(&self.buf);
        let f = if raw.is_finite() { raw.min(COST_CEILING) } else { COST_CEILING };
        self.evaluations += 1;
        if f < self.best {
            self.best = f;
            self.best_x.clone_from(&self.buf);
            self.trace.push(TracePoint { evaluation: self.evaluations, cost: f });
        }
        f
    }
}

pub(crate) fn run_generator(seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}

/// One restart: global search, then local refinement from its best point.
pub(crate) fn run_once(problem: &BoundedProblem<'_>, config: &OptimizerConfig, run: usize) -> TrainRecord {
    let mut tracker = Tracker::new(problem);
    let mut rng = run_generator(config.seed, run);
    let global = crs_stage(&mut tracker, config, &mut rng);
    let global_evaluations = tracker.evaluations();
    let start = tracker.best().1.to_vec();
    let local = local_stage(&mut tracker, &start, config);
    TrainRecord {
        seed: config.seed,
        run,
        best_cost: tracker.best,
        best_params: tracker.best_x.clone(),
        evaluations: tracker.evaluations,
        global_evaluations,
        local_evaluations: tracker.evaluations - global_evaluations,
        global_iterations: global.iterations,
        local_iterations: local.iterations,
        global_budget_exhausted: global.exhausted,
        local_budget_exhausted: local.exhausted,
        local_failure: local.failure,
        budget: config.budget,
        tol_global: config.tol_global,
        tol_local: config.tol_local,
        trace: tracker.trace,
    }
}

/// Independent restarts seeded from `(config.seed, run index)`.
///
/// Runs execute in parallel unless `stop_below` is set, in which case they run
/// in order and stop at the first run reaching the target. Ties on the best
/// cost go to the lowest run index.
pub fn train(problem: &BoundedProblem<'_>, config: &OptimizerConfig) -> Result<TrainOutcome> {
    if config.runs == 0 {
        return Err(Error::Config("at least one optimization run is required".into()));
    }
    let records: Vec<TrainRecord> = match config.stop_below {
        Some(target) => {
            let mut out = Vec::new();
            for run in 0..config.runs {
                let rec = run_once(problem, config, run);
                let done = rec.best_cost <= target;
                out.push(rec);
                if done {
                    break;
                }
            }
            out
        }
        None => (0..config.runs).into_par_iter().map(|run| run_once(problem, config, run)).collect(),
    };
    let mut best = 0;
    for (k, r) in records.iter().enumerate() {
        if r.best_cost < records[best].best_cost {
            best = k;
        }
    }
    Ok(TrainOutcome { records, best })
}

impl Tracker<'_, '_> {
    /// Record for a single stage run in isolation.
    pub(crate) fn into_record(self, config: &OptimizerConfig, run: usize, iterations: usize, exhausted: bool) -> TrainRecord {
        TrainRecord {
            seed: config.seed,
            run,
            best_cost: self.best,
            best_params: self.best_x,
            evaluations: self.evaluations,
            global_evaluations: self.evaluations,
            local_evaluations: 0,
            global_iterations: iterations,
            local_iterations: 0,
            global_budget_exhausted: exhausted,
            local_budget_exhausted: false,
            local_failure: None,
            budget: config.budget,
            tol_global: config.tol_global,
            tol_local: config.tol_local,
            trace: self.trace,
        }
    }
}
