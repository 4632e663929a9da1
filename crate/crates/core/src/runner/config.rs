use std::f64::consts::TAU;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::network::Architecture;
use crate::optimizer::OptimizerConfig;
use crate::tasks::LatticeFragment;
use crate::{Error, Result};

/// Version string stored with every persisted result.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Prepare,
    Discriminate,
    Vqe,
}

impl Task {
    pub fn default_threshold(self) -> f64 {
        match self {
            Task::Prepare | Task::Discriminate => 1e-7,
            Task::Vqe => 1e-3,
        }
    }
}

/// The targets swept for each depth and bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Targets {
    /// GHZ-family states at each entanglement angle.
    Ghz { alpha: Vec<f64> },
    /// Haar-random states, one per seed.
    Haar { seeds: Vec<u64> },
    /// States read from amplitude dump files.
    States { paths: Vec<PathBuf> },
    /// Bell-state discrimination with 4 or 6 states.
    Bell { states: usize },
    /// Heisenberg models sampled on a lattice fragment, plus models read from files.
    Heisenberg {
        #[serde(default)]
        seeds: Vec<u64>,
        #[serde(default)]
        fragment: LatticeFragment,
        #[serde(default)]
        model_files: Vec<PathBuf>,
    },
}

/// One sweep: every `(phi_b, target, depth)` cell is trained independently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub task: Task,
    #[serde(default = "default_architecture")]
    pub architecture: Architecture,
    /// Required for state preparation; implied by the targets otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<usize>,
    pub depths: Vec<usize>,
    /// Ignored by the linear-optics architecture.
    #[serde(default = "default_phi")]
    pub phi_b: Vec<f64>,
    pub targets: Targets,
    #[serde(default = "default_true")]
    pub corrections: bool,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    /// Success threshold on the reported cost; defaults per task.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Skip the remaining depths of a series once one meets the threshold.
    #[serde(default)]
    pub stop_at_threshold: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn default_architecture() -> Architecture {
    Architecture::Nonlinear
}

fn default_phi() -> Vec<f64> {
    vec![0.0]
}

fn default_true() -> bool {
    true
}

/// Parse `"3"`, `"1-12"` or `"1,3,5"` (ranges may appear in lists).
pub fn parse_depths(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || Error::Config(format!("bad depth specification '{part}'"));
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(self.task.default_threshold())
    }

    /// Number of qubits, from the targets where they fix it.
    pub fn resolved_qubits(&self) -> Result<usize> {
        let implied = match &self.targets {
            Targets::Bell { .. } => Some(2),
            Targets::Heisenberg { fragment, model_files, seeds } => {
                if seeds.is_empty() && !model_files.is_empty() {
                    None
                } else {
                    Some(fragment.spins)
                }
            }
            _ => None,
        };
        match (implied, self.qubits) {
            (Some(a), Some(b)) if a != b => Err(Error::Config(format!("targets need {a} qubits, config says {b}"))),
            (Some(a), _) => Ok(a),
            (None, Some(b)) => Ok(b),
            (None, None) => Err(Error::Config("the number of qubits must be given".into())),
        }
    }

    /// Biases actually swept; a single zero for the linear-optics baseline.
    pub fn swept_phi(&self) -> Vec<f64> {
        match self.architecture {
            Architecture::Nonlinear => self.phi_b.clone(),
            Architecture::Linear => vec![0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depths.is_empty() {
            return Err(Error::Config("depth range is empty".into()));
        }
        if self.phi_b.is_empty() {
            return Err(Error::Config("no bias values given".into()));
        }
        if let Some(&phi) = self.phi_b.iter().find(|p| !(0.0..TAU).contains(*p)) {
            return Err(Error::Config(format!("bias {phi} outside [0, 2pi)")));
        }
        let matches = matches!(
            (self.task, &self.targets),
            (Task::Prepare, Targets::Ghz { .. } | Targets::Haar { .. } | Targets::States { .. })
                | (Task::Discriminate, Targets::Bell { .. })
                | (Task::Vqe, Targets::Heisenberg { .. })
        );
        if !matches {
            return Err(Error::Config(format!("targets {:?} do not fit task {:?}", self.targets, self.task)));
        }
        let empty = match &self.targets {
            Targets::Ghz { alpha } => alpha.is_empty(),
            Targets::Haar { seeds } => seeds.is_empty(),
            Targets::States { paths } => paths.is_empty(),
            Targets::Bell { states } => {
                if *states != 4 && *states != 6 {
                    return Err(Error::Config(format!("discrimination needs 4 or 6 states, got {states}")));
                }
                false
            }
            Targets::Heisenberg { seeds, model_files, .. } => seeds.is_empty() && model_files.is_empty(),
        };
        if empty {
            return Err(Error::Config("no targets given".into()));
        }
        let qubits = self.resolved_qubits()?;
        if qubits == 0 {
            return Err(Error::Config("at least one qubit is required".into()));
        }
        if self.optimizer.runs == 0 {
            return Err(Error::Config("at least one optimization run is required".into()));
        }
        Ok(())
    }

    /// SHA-256 of the configuration with the output location removed.
    pub fn hash(&self) -> String {
        let mut canon = self.clone();
        canon.output = None;
        let text = serde_json::to_string(&canon).expect("config serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
