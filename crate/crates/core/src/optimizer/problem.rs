use serde::{Deserialize, Serialize};

use crate::{Error, Result};

type Objective<'a> = Box<dyn Fn(&[f64]) -> f64 + Send + Sync + 'a>;

/// Box-constrained minimization problem.
pub struct BoundedProblem<'a> {
    lower: Vec<f64>,
    upper: Vec<f64>,
    objective: Objective<'a>,
    corrections: Vec<(usize, f64)>,
}

impl std::fmt::Debug for BoundedProblem<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundedProblem")
            .field("dim", &self.dim())
            .field("corrections", &self.corrections.len())
            .finish()
    }
}

impl<'a> BoundedProblem<'a> {
    pub fn new(
        lower: Vec<f64>,
        upper: Vec<f64>,
        objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'a,
    ) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::shape(format!("{} lower vs {} upper bounds", lower.len(), upper.len())));
        }
        for (k, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::Config(format!("invalid bounds [{lo}, {hi}] on coordinate {k}")));
            }
        }
        Ok(BoundedProblem { lower, upper, objective: Box::new(objective), corrections: Vec::new() })
    }

    /// Same bounds `[lo, hi]` on every coordinate.
    pub fn uniform(
        dim: usize,
        lo: f64,
        hi: f64,
        objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'a,
    ) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim], objective)
    }

    /// Mark coordinates as single-qubit corrections together with the value
    /// at which they act as the identity.
    pub fn with_corrections(mut self, slots: Vec<(usize, f64)>) -> Result<Self> {
        for &(k, v) in &slots {
            if k >= self.dim() || v < self.lower[k] || v > self.upper[k] {
                return Err(Error::Config(format!("correction slot {k} = {v} is invalid")));
            }
        }
        self.corrections = slots;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn corrections(&self) -> &[(usize, f64)] {
        &self.corrections
    }

    /// Raw objective value; the caller is responsible for staying in bounds.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.lower).zip(&self.upper).all(|((v, lo), hi)| lo <= v && v <= hi)
    }

    pub fn clamp_into(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// Insert the identity values of the correction slots into a reduced vector.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let mut full = Vec::with_capacity(self.dim());
        let mut it = reduced.iter();
        for k in 0..self.dim() {
            match self.corrections.iter().find(|(s, _)| *s == k) {
                Some(&(_, v)) => full.push(v),
                None => full.push(*it.next().expect("reduced vector too short")),
            }
        }
        full
    }
}

/// Reduced problem with every correction coordinate held at its identity value.
pub fn freeze_corrections<'p>(problem: &'p BoundedProblem<'_>) -> BoundedProblem<'p> {
    let keep: Vec<usize> = (0..problem.dim())
        .filter(|k| !problem.corrections.iter().any(|(s, _)| s == k))
        .collect();
    let lower = keep.iter().map(|&k| problem.lower[k]).collect();
    let upper = keep.iter().map(|&k| problem.upper[k]).collect();
    BoundedProblem {
        lower,
        upper,
        objective: Box::new(move |x: &[f64]| problem.evaluate(&problem.expand(x))),
        corrections: Vec::new(),
    }
}

/// Settings shared by both stages and the restart loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Independent restarts.
    pub runs: usize,
    /// Evaluation budget per stage per run.
    pub budget: usize,
    /// Stop the global stage when a generation improves the best cost by less.
    pub tol_global: f64,
    /// Stop the local stage when a successful step improves the cost by less.
    pub tol_local: f64,
    pub seed: u64,
    /// Initial trust-region radius as a fraction of the narrowest bound range.
    pub rho_begin: f64,
    /// Final trust-region radius.
    pub rho_end: f64,
    /// Run sequentially and stop once a run reaches this cost.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_below: Option<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            runs: 50,
            budget: 100_000,
            tol_global: 1e-4,
            tol_local: 1e-14,
            seed: 0,
            rho_begin: 0.1,
            rho_end: 1e-8,
            stop_below: None,
        }
    }
}
