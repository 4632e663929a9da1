use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::fock::{DualRail, StateVector};
use crate::network::{count_params, lo_depth, Architecture, Circuit, LinOptQonn, LoQonn, NmziMesh, Qonn};
use crate::optimizer::{freeze_corrections, train, BoundedProblem, OptimizerConfig, TrainOutcome, TrainRecord};
use crate::runner::Task;
use crate::tasks::{
    build_hamiltonian, discrimination_cost, fidelity_cost, target_ghz, target_haar_random, vqe_cost,
    DiscriminationSet, Hamiltonian, HeisenbergModel,
};
use crate::{Error, Result};

/// Position of a cell in a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub depth: usize,
    pub phi_b: f64,
    pub target: String,
}

/// A concrete target of one sweep series.
#[derive(Debug, Clone)]
pub enum TargetInstance {
    Ghz { alpha: f64 },
    Haar { seed: u64 },
    State { label: String, state: StateVector<f64> },
    Bell { states: usize },
    Heisenberg { label: String, model: HeisenbergModel },
}

impl TargetInstance {
    pub fn label(&self) -> String {
        match self {
            TargetInstance::Ghz { alpha } => format!("ghz:alpha={alpha}"),
            TargetInstance::Haar { seed } => format!("haar:seed={seed}"),
            TargetInstance::State { label, .. } => format!("state:{label}"),
            TargetInstance::Bell { states } => format!("bell-{states}"),
            TargetInstance::Heisenberg { label, .. } => format!("heisenberg:{label}"),
        }
    }
}

/// Everything needed to train one cell.
#[derive(Debug, Clone)]
pub struct CellSpec {
    pub task: Task,
    pub architecture: Architecture,
    pub qubits: usize,
    pub depth: usize,
    pub phi_b: f64,
    pub corrections: bool,
    pub target: TargetInstance,
}

impl CellSpec {
    pub fn key(&self) -> CellKey {
        CellKey { depth: self.depth, phi_b: self.phi_b, target: self.target.label() }
    }
}

/// Summary over the restarts of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub runs: usize,
    /// Runs whose reported cost met the threshold.
    pub successes: usize,
    pub mean_cost: f64,
    pub median_cost: f64,
    pub worst_cost: f64,
    pub total_evaluations: usize,
}

/// Outcome of one cell. For VQE the reported cost is the energy error
/// `E - E_exact`; otherwise it is the training cost itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub task: Task,
    pub architecture: Architecture,
    pub qubits: usize,
    pub depth: usize,
    pub phi_b: f64,
    pub target: String,
    pub corrections: bool,
    /// Parameter count of the architecture, corrections excluded.
    pub params: usize,
    /// Coordinates actually optimized.
    pub trainable: usize,
    /// Linear depth of the baseline architecture.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_lo: Option<usize>,
    pub seed: u64,
    pub best_run: usize,
    pub best_cost: Option<f64>,
    /// Full parameter vector: strengths then corrections, or interferometer phases.
    pub best_params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<RunStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CellResult {
    pub fn key(&self) -> CellKey {
        CellKey { depth: self.depth, phi_b: self.phi_b, target: self.target.clone() }
    }

    pub fn succeeded(&self, threshold: f64) -> bool {
        self.best_cost.is_some_and(|c| c <= threshold)
    }
}

/// Seed of a cell derived from the master seed and the cell coordinates.
pub fn cell_seed(master: u64, task: Task, architecture: Architecture, qubits: usize, key: &CellKey) -> u64 {
    let text = format!(
        "{master}|{task:?}|{architecture:?}|{qubits}|{}|{:016x}|{}",
        key.depth,
        key.phi_b.to_bits(),
        key.target
    );
    let digest = Sha256::digest(text.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("eight bytes"))
}

enum Evaluator {
    Prepare { input: StateVector<f64>, target: StateVector<f64> },
    Discriminate { set: DiscriminationSet<f64> },
    Vqe { code: DualRail, hamiltonian: Hamiltonian, penalty: f64 },
}

impl Evaluator {
    fn new(spec: &CellSpec) -> Result<Self> {
        let n = spec.qubits;
        let code = DualRail::new(n)?;
        Ok(match &spec.target {
            TargetInstance::Ghz { alpha } => {
                Evaluator::Prepare { input: code.encode(&vec![false; n])?, target: target_ghz(n, *alpha)? }
            }
            TargetInstance::Haar { seed } => {
                Evaluator::Prepare { input: code.encode(&vec![false; n])?, target: target_haar_random(n, *seed)? }
            }
            TargetInstance::State { state, .. } => {
                if !state.basis().same_shape(code.basis()) {
                    return Err(Error::shape(format!("target state is not a {n}-qubit dual-rail state")));
                }
                let target = StateVector::from_amplitudes(code.basis().clone(), state.amplitudes().to_vec())?;
                Evaluator::Prepare { input: code.encode(&vec![false; n])?, target }
            }
            TargetInstance::Bell { states } => {
                if n != 2 {
                    return Err(Error::Config("discrimination runs on two qubits".into()));
                }
                Evaluator::Discriminate { set: DiscriminationSet::new(*states)? }
            }
            TargetInstance::Heisenberg { model, .. } => {
                if model.spins != n {
                    return Err(Error::Config(format!("model has {} spins, network {n} qubits", model.spins)));
                }
                let hamiltonian = build_hamiltonian(model)?;
                let penalty = hamiltonian.gershgorin_bound();
                Evaluator::Vqe { code, hamiltonian, penalty }
            }
        })
    }

    fn cost<C: Circuit<f64>>(&self, circuit: &C) -> f64 {
        match self {
            Evaluator::Prepare { input, target } => {
                circuit.apply(input).and_then(|out| fidelity_cost(&out, target)).unwrap_or(1.0)
            }
            Evaluator::Discriminate { set } => discrimination_cost(circuit, set).unwrap_or(1.0),
            Evaluator::Vqe { code, hamiltonian, penalty } => vqe_cost(circuit, hamiltonian, code).unwrap_or(*penalty),
        }
    }

    fn exact_energy(&self) -> Option<f64> {
        match self {
            Evaluator::Vqe { hamiltonian, .. } => Some(hamiltonian.ground_energy()),
            _ => None,
        }
    }
}

fn train_nonlinear(spec: &CellSpec, eval: Evaluator, config: &OptimizerConfig) -> Result<(TrainOutcome, usize)> {
    let mesh = NmziMesh::new(2 * spec.qubits, spec.depth, spec.phi_b)?.with_corrections(spec.corrections);
    let p_nl = mesh.nonlinear_params();
    let q = 4 * spec.qubits;
    let lower = vec![0.0; p_nl + q];
    let mut upper = vec![PI; p_nl];
    upper.extend(std::iter::repeat_n(TAU, q));
    let problem = BoundedProblem::new(lower, upper, move |x: &[f64]| {
        let (chi, theta) = x.split_at(p_nl);
        eval.cost(&Qonn { mesh: &mesh, chi, theta })
    })?
    .with_corrections((p_nl..p_nl + q).map(|k| (k, 0.0)).collect())?;
    if spec.corrections {
        Ok((train(&problem, config)?, problem.dim()))
    } else {
        let reduced = freeze_corrections(&problem);
        let mut outcome = train(&reduced, config)?;
        for rec in &mut outcome.records {
            rec.best_params = problem.expand(&rec.best_params);
        }
        Ok((outcome, reduced.dim()))
    }
}

fn train_linear(spec: &CellSpec, eval: Evaluator, config: &OptimizerConfig) -> Result<(TrainOutcome, usize)> {
    let net = LinOptQonn::new(2 * spec.qubits, spec.depth)?;
    let p = net.param_count();
    let problem = BoundedProblem::uniform(p, 0.0, TAU, move |x: &[f64]| eval.cost(&LoQonn { net: &net, theta: x }))?;
    Ok((train(&problem, config)?, p))
}

fn reported_costs(outcome: &TrainOutcome, exact: Option<f64>) -> Vec<f64> {
    outcome
        .records
        .iter()
        .map(|r| match exact {
            Some(e) => r.best_cost - e,
            None => r.best_cost,
        })
        .collect()
}

fn run_stats(costs: &[f64], records: &[TrainRecord], threshold: f64) -> RunStats {
    let mut sorted = costs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    let median = if k % 2 == 1 { sorted[k / 2] } else { 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]) };
    RunStats {
        runs: k,
        successes: costs.iter().filter(|&&c| c <= threshold).count(),
        mean_cost: costs.iter().sum::<f64>() / k as f64,
        median_cost: median,
        worst_cost: sorted[k - 1],
        total_evaluations: records.iter().map(|r| r.evaluations).sum(),
    }
}

/// Train one cell with its derived seed. Failures are recorded in the
/// result rather than returned.
pub fn evaluate_cell(spec: &CellSpec, optimizer: &OptimizerConfig, threshold: f64) -> (CellResult, Vec<TrainRecord>) {
    let modes = 2 * spec.qubits;
    let key = spec.key();
    let seed = cell_seed(optimizer.seed, spec.task, spec.architecture, spec.qubits, &key);
    let (corrections, d_lo) = match spec.architecture {
        Architecture::Nonlinear => (spec.corrections, None),
        Architecture::Linear => (false, Some(lo_depth(modes, spec.depth))),
    };
    let mut cell = CellResult {
        task: spec.task,
        architecture: spec.architecture,
        qubits: spec.qubits,
        depth: spec.depth,
        phi_b: spec.phi_b,
        target: key.target,
        corrections,
        params: count_params(modes, spec.depth, spec.architecture),
        trainable: 0,
        d_lo,
        seed,
        best_run: 0,
        best_cost: None,
        best_params: Vec::new(),
        stats: None,
        exact_energy: None,
        best_energy: None,
        error: None,
    };
    let config = OptimizerConfig { seed, ..optimizer.clone() };
    let attempt = Evaluator::new(spec).and_then(|eval| {
        let exact = eval.exact_energy();
        let (outcome, trainable) = match spec.architecture {
            Architecture::Nonlinear => train_nonlinear(spec, eval, &config)?,
            Architecture::Linear => train_linear(spec, eval, &config)?,
        };
        Ok((outcome, trainable, exact))
    });
    match attempt {
        Ok((outcome, trainable, exact)) => {
            let costs = reported_costs(&outcome, exact);
            cell.trainable = trainable;
            cell.best_run = outcome.best;
            cell.best_cost = Some(costs[outcome.best]);
            cell.best_params = outcome.best_record().best_params.clone();
            cell.stats = Some(run_stats(&costs, &outcome.records, threshold));
            cell.exact_energy = exact;
            cell.best_energy = exact.map(|_| outcome.best_cost());
            (cell, outcome.records)
        }
        Err(e) => {
            cell.error = Some(e.to_string());
            (cell, Vec::new())
        }
    }
}
