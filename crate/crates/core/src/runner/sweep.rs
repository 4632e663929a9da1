use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cell::{evaluate_cell, CellKey, CellResult, CellSpec, TargetInstance};
use super::config::{ExperimentConfig, Targets, Task, CODE_VERSION};
use super::output::{emit_curves, params_dump, CurveFormat};
use crate::fock::StateVector;
use crate::network::Architecture;
use crate::optimizer::TrainRecord;
use crate::tasks::{sample_lattice_model_on, HeisenbergModel};
use crate::{Error, Result};

/// All cells of a sweep in grid order: bias, then target, then depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config_hash: String,
    pub code_version: String,
    pub task: Task,
    pub architecture: Architecture,
    pub qubits: usize,
    pub threshold: f64,
    pub cells: Vec<CellResult>,
}

impl SweepResult {
    pub fn errored(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let path = if path.is_dir() { path.join("result.json") } else { path.to_path_buf() };
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// One line of `runs.jsonl`: a restart with enough context to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLine {
    pub config_hash: String,
    pub code_version: String,
    pub cell: CellKey,
    pub cell_seed: u64,
    pub record: TrainRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct StoredCell {
    cell: CellResult,
    records: Vec<TrainRecord>,
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn instances(config: &ExperimentConfig) -> Result<Vec<TargetInstance>> {
    Ok(match &config.targets {
        Targets::Ghz { alpha } => alpha.iter().map(|&alpha| TargetInstance::Ghz { alpha }).collect(),
        Targets::Haar { seeds } => seeds.iter().map(|&seed| TargetInstance::Haar { seed }).collect(),
        Targets::States { paths } => paths
            .iter()
            .map(|p| {
                let state = StateVector::from_json(&fs::read_to_string(p)?)?;
                Ok(TargetInstance::State { label: file_stem(p), state })
            })
            .collect::<Result<_>>()?,
        Targets::Bell { states } => vec![TargetInstance::Bell { states: *states }],
        Targets::Heisenberg { seeds, fragment, model_files } => {
            let mut out: Vec<TargetInstance> = seeds
                .iter()
                .map(|&seed| TargetInstance::Heisenberg {
                    label: format!("seed={seed}"),
                    model: sample_lattice_model_on(fragment, seed),
                })
                .collect();
            for p in model_files {
                let model = HeisenbergModel::from_json(&fs::read_to_string(p)?)?;
                out.push(TargetInstance::Heisenberg { label: format!("file={}", file_stem(p)), model });
            }
            out
        }
    })
}

struct Store {
    dir: PathBuf,
}

impl Store {
    fn open(dir: &Path, config: &ExperimentConfig) -> Result<Self> {
        fs::create_dir_all(dir.join("cells"))?;
        let config_path = dir.join("config.json");
        if config_path.exists() {
            let previous = ExperimentConfig::from_json(&fs::read_to_string(&config_path)?)?;
            if previous.hash() != config.hash() {
                return Err(Error::Config(format!("{} holds results of a different sweep", dir.display())));
            }
        } else {
            let mut canon = config.clone();
            canon.output = None;
            fs::write(&config_path, canon.to_json()? + "\n")?;
        }
        Ok(Store { dir: dir.to_path_buf() })
    }

    fn cell_path(&self, series: usize, depth: usize) -> PathBuf {
        self.dir.join("cells").join(format!("series{series:03}-depth{depth:03}.json"))
    }

    fn load(&self, series: usize, depth: usize) -> Option<StoredCell> {
        let text = fs::read_to_string(self.cell_path(series, depth)).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn save(&self, series: usize, depth: usize, stored: &StoredCell) -> Result<()> {
        let path = self.cell_path(series, depth);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(stored)?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

fn execute(config: &ExperimentConfig, store: Option<&Store>) -> Result<(SweepResult, Vec<StoredCell>)> {
    config.validate()?;
    let qubits = config.resolved_qubits()?;
    let threshold = config.threshold();
    let targets = instances(config)?;
    let series: Vec<(f64, TargetInstance)> = config
        .swept_phi()
        .into_iter()
        .flat_map(|phi| targets.iter().map(move |t| (phi, t.clone())))
        .collect();
    let done: Vec<Vec<StoredCell>> = series
        .par_iter()
        .enumerate()
        .map(|(index, (phi, target))| -> Result<Vec<StoredCell>> {
            let mut cells = Vec::new();
            for &depth in &config.depths {
                let stored = match store.and_then(|s| s.load(index, depth)) {
                    Some(stored) => stored,
                    None => {
                        let spec = CellSpec {
                            task: config.task,
                            architecture: config.architecture,
                            qubits,
                            depth,
                            phi_b: *phi,
                            corrections: config.corrections,
                            target: target.clone(),
                        };
                        let (cell, records) = evaluate_cell(&spec, &config.optimizer, threshold);
                        let stored = StoredCell { cell, records };
                        if let Some(s) = store {
                            s.save(index, depth, &stored)?;
                        }
                        stored
                    }
                };
                let success = stored.cell.succeeded(threshold);
                cells.push(stored);
                if config.stop_at_threshold && success {
                    break;
                }
            }
            Ok(cells)
        })
        .collect::<Result<_>>()?;
    let stored: Vec<StoredCell> = done.into_iter().flatten().collect();
    let result = SweepResult {
        config_hash: config.hash(),
        code_version: CODE_VERSION.to_string(),
        task: config.task,
        architecture: config.architecture,
        qubits,
        threshold,
        cells: stored.iter().map(|s| s.cell.clone()).collect(),
    };
    Ok((result, stored))
}

/// Run every cell in memory.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    match &config.output {
        Some(dir) => run_sweep_in(config, dir),
        None => Ok(execute(config, None)?.0),
    }
}

/// Run a sweep persisting each cell under `dir`, resuming from cells already
/// there. Writes `config.json`, `runs.jsonl`, `result.json`, `curves.csv` and
/// `params.json`.
pub fn run_sweep_in(config: &ExperimentConfig, dir: &Path) -> Result<SweepResult> {
    let store = Store::open(dir, config)?;
    let (result, stored) = execute(config, Some(&store))?;
    let mut runs = fs::File::create(dir.join("runs.jsonl"))?;
    for s in &stored {
        for record in &s.records {
            let line = RunLine {
                config_hash: result.config_hash.clone(),
                code_version: result.code_version.clone(),
                cell: s.cell.key(),
                cell_seed: s.cell.seed,
                record: record.clone(),
            };
            writeln!(runs, "{}", serde_json::to_string(&line)?)?;
        }
    }
    fs::write(dir.join("result.json"), result.to_json()? + "\n")?;
    emit_curves(&result, dir, CurveFormat::Csv)?;
    let dumps = result
        .cells
        .iter()
        .filter(|c| c.error.is_none())
        .map(params_dump)
        .collect::<Result<Vec<_>>>()?;
    fs::write(dir.join("params.json"), serde_json::to_string_pretty(&dumps)? + "\n")?;
    Ok(result)
}
