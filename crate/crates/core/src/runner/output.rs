use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::cell::CellResult;
use super::config::Task;
use super::sweep::SweepResult;
use crate::fock::{DualRail, StateVector};
use crate::network::{record_layer_amplitudes, record_lo_layer_amplitudes, Architecture, LinOptQonn, NmziMesh};
use crate::tasks::DiscriminationSet;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFormat {
    Csv,
    Json,
}

/// Write `curves.csv` (one row per cell, grid order) or `curves.json` (the
/// whole result) into `dir`.
pub fn emit_curves(result: &SweepResult, dir: &Path, format: CurveFormat) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    match format {
        CurveFormat::Csv => {
            let path = dir.join("curves.csv");
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(["depth", "phi_b", "target", "best_cost", "params", "runs"])?;
            for c in &result.cells {
                w.write_record([
                    c.depth.to_string(),
                    c.phi_b.to_string(),
                    c.target.clone(),
                    c.best_cost.map(|v| v.to_string()).unwrap_or_default(),
                    c.params.to_string(),
                    c.stats.as_ref().map_or(0, |s| s.runs).to_string(),
                ])?;
            }
            w.flush()?;
            Ok(path)
        }
        CurveFormat::Json => {
            let path = dir.join("curves.json");
            fs::write(&path, result.to_json()? + "\n")?;
            Ok(path)
        }
    }
}

/// Strengths of one NMZI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDump {
    pub modes: (usize, usize),
    pub chi1: f64,
    pub chi2: f64,
}

/// Trained parameters of a cell, grouped the way the network uses them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsDump {
    pub depth: usize,
    pub phi_b: f64,
    pub target: String,
    pub architecture: Architecture,
    /// Nonlinear mesh: strengths per layer.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layers: Vec<Vec<BlockDump>>,
    /// `(theta1, theta2)` of each qubit's input correction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corrections_in: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corrections_out: Vec<[f64; 2]>,
    /// Baseline: MZI phases of each interferometer.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub interferometers: Vec<Vec<f64>>,
}

fn pairs(v: &[f64]) -> Vec<[f64; 2]> {
    v.chunks_exact(2).map(|c| [c[0], c[1]]).collect()
}

pub fn params_dump(cell: &CellResult) -> Result<ParamsDump> {
    let mut dump = ParamsDump {
        depth: cell.depth,
        phi_b: cell.phi_b,
        target: cell.target.clone(),
        architecture: cell.architecture,
        layers: Vec::new(),
        corrections_in: Vec::new(),
        corrections_out: Vec::new(),
        interferometers: Vec::new(),
    };
    match cell.architecture {
        Architecture::Nonlinear => {
            let mesh = NmziMesh::new(2 * cell.qubits, cell.depth, cell.phi_b)?;
            let p = mesh.nonlinear_params();
            if cell.best_params.len() != p + 4 * cell.qubits {
                return Err(Error::ParamCount { expected: p + 4 * cell.qubits, got: cell.best_params.len() });
            }
            let (chi, theta) = cell.best_params.split_at(p);
            dump.layers = mesh
                .bind(chi)?
                .into_iter()
                .map(|layer| {
                    layer
                        .into_iter()
                        .map(|(modes, b)| BlockDump { modes, chi1: b.chi1, chi2: b.chi2 })
                        .collect()
                })
                .collect();
            let (tin, tout) = theta.split_at(2 * cell.qubits);
            dump.corrections_in = pairs(tin);
            dump.corrections_out = pairs(tout);
        }
        Architecture::Linear => {
            let net = LinOptQonn::new(2 * cell.qubits, cell.depth)?;
            if cell.best_params.len() != net.param_count() {
                return Err(Error::ParamCount { expected: net.param_count(), got: cell.best_params.len() });
            }
            dump.interferometers =
                cell.best_params.chunks_exact(net.phases_per_interferometer()).map(<[f64]>::to_vec).collect();
        }
    }
    Ok(dump)
}

/// Snapshots for one input state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSnapshots {
    pub input: String,
    pub layers: Vec<Vec<f64>>,
}

/// Amplitude magnitudes entering each nonlinear layer of a trained cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerAmplitudeDump {
    pub depth: usize,
    pub phi_b: f64,
    pub target: String,
    pub basis: Vec<Vec<u8>>,
    pub inputs: Vec<InputSnapshots>,
}

pub fn layer_amplitude_dump(cell: &CellResult) -> Result<LayerAmplitudeDump> {
    let n = cell.qubits;
    let code = DualRail::new(n)?;
    let inputs: Vec<(String, StateVector<f64>)> = match cell.task {
        Task::Discriminate => {
            let states = if cell.target.ends_with('6') { 6 } else { 4 };
            DiscriminationSet::<f64>::new(states)?
                .pairs()
                .iter()
                .map(|p| (p.label.to_string(), p.input.clone()))
                .collect()
        }
        Task::Prepare | Task::Vqe => vec![("0".repeat(n), code.encode(&vec![false; n])?)],
    };
    let mut out = Vec::with_capacity(inputs.len());
    for (label, input) in inputs {
        let layers = match cell.architecture {
            Architecture::Nonlinear => {
                let mesh = NmziMesh::new(2 * n, cell.depth, cell.phi_b)?;
                let p = mesh.nonlinear_params();
                if cell.best_params.len() != p + 4 * n {
                    return Err(Error::ParamCount { expected: p + 4 * n, got: cell.best_params.len() });
                }
                let (chi, theta) = cell.best_params.split_at(p);
                record_layer_amplitudes(&input, &mesh, chi, theta)?
            }
            Architecture::Linear => {
                let net = LinOptQonn::new(2 * n, cell.depth)?;
                record_lo_layer_amplitudes(&input, &net, &cell.best_params)?
            }
        };
        out.push(InputSnapshots { input: label, layers });
    }
    Ok(LayerAmplitudeDump {
        depth: cell.depth,
        phi_b: cell.phi_b,
        target: cell.target.clone(),
        basis: code.basis().states().map(<[u8]>::to_vec).collect(),
        inputs: out,
    })
}
