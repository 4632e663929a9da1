use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::train::{run_generator, Tracker};
use super::{BoundedProblem, OptimizerConfig, TrainRecord};

/// Attempts at drawing a reflected trial inside the box before clamping.
const FEASIBLE_RETRIES: usize = 100;

pub(crate) struct StageStats {
    pub iterations: usize,
    pub exhausted: bool,
}

fn argmin(f: &[f64]) -> usize {
    (0..f.len()).fold(0, |b, k| if f[k] < f[b] { k } else { b })
}

fn argmax(f: &[f64]) -> usize {
    (0..f.len()).fold(0, |b, k| if f[k] > f[b] { k } else { b })
}

/// Population size of the global stage, `10 (P + 1)`.
pub fn population_size(dim: usize) -> usize {
    10 * (dim + 1)
}

/// CRS2 with local mutation. Population of `10 (P + 1)` uniform points; each
/// iteration reflects one simplex vertex through the centroid of the others
/// (the best point always among them) and, if that fails to beat the worst
/// point, tries a mutation around the best point. A generation is one
/// population's worth of iterations; the stage ends when a generation lowers
/// the best cost by less than `tol_global`.
pub(crate) fn crs_stage(tracker: &mut Tracker<'_, '_>, config: &OptimizerConfig, rng: &mut ChaCha8Rng) -> StageStats {
    let problem = tracker.problem();
    let dim = problem.dim();
    let (lo, hi) = (problem.lower(), problem.upper());
    let start = tracker.evaluations();
    let budget_left = |t: &Tracker<'_, '_>| t.evaluations() - start < config.budget;
    if dim == 0 {
        tracker.eval(&[]);
        return StageStats { iterations: 0, exhausted: false };
    }

    let size = population_size(dim);
    let mut pop: Vec<Vec<f64>> = Vec::with_capacity(size);
    let mut cost: Vec<f64> = Vec::with_capacity(size);
    for _ in 0..size {
        if !budget_left(tracker) {
            break;
        }
        let x: Vec<f64> = (0..dim).map(|k| rng.random_range(lo[k]..=hi[k])).collect();
        cost.push(tracker.eval(&x));
        pop.push(x);
    }
    if pop.len() < dim + 1 {
        return StageStats { iterations: 0, exhausted: true };
    }
    let size = pop.len();

    let mut trial = vec![0.0; dim];
    let mut mutant = vec![0.0; dim];
    let mut iterations = 0;
    let mut generation_best = cost[argmin(&cost)];
    loop {
        if !budget_left(tracker) {
            return StageStats { iterations, exhausted: true };
        }
        let best = argmin(&cost);
        let mut feasible = false;
        for _ in 0..FEASIBLE_RETRIES {
            let others: Vec<usize> = sample(rng, size - 1, dim)
                .into_iter()
                .map(|k| if k >= best { k + 1 } else { k })
                .collect();
            let (last, rest) = others.split_last().expect("dim >= 1");
            for k in 0..dim {
                let centroid = (pop[best][k] + rest.iter().map(|&j| pop[j][k]).sum::<f64>()) / dim as f64;
                trial[k] = 2.0 * centroid - pop[*last][k];
            }
            feasible = problem.contains(&trial);
            if feasible {
                break;
            }
        }
        if !feasible {
            problem.clamp_into(&mut trial);
        }
        let worst = argmax(&cost);
        let f_trial = tracker.eval(&trial);
        if f_trial < cost[worst] {
            pop[worst].copy_from_slice(&trial);
            cost[worst] = f_trial;
        } else if budget_left(tracker) {
            for k in 0..dim {
                let w: f64 = rng.random();
                mutant[k] = (1.0 + w) * pop[best][k] - w * trial[k];
            }
            problem.clamp_into(&mut mutant);
            let f_mut = tracker.eval(&mutant);
            if f_mut < cost[worst] {
                pop[worst].copy_from_slice(&mutant);
                cost[worst] = f_mut;
            }
        }
        iterations += 1;
        if iterations % size == 0 {
            let now = cost[argmin(&cost)];
            if generation_best - now < config.tol_global {
                return StageStats { iterations, exhausted: false };
            }
            generation_best = now;
        }
    }
}

/// Global stage alone, as run `run` of the restart sequence.
pub fn crs_global(problem: &BoundedProblem<'_>, config: &OptimizerConfig, run: usize) -> TrainRecord {
    let mut tracker = Tracker::new(problem);
    let mut rng = run_generator(config.seed, run);
    let stats = crs_stage(&mut tracker, config, &mut rng);
    tracker.into_record(config, run, stats.iterations, stats.exhausted)
}
