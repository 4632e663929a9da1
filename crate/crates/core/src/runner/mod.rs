//! Experiment orchestration: configuration, depth sweeps over biases and
//! targets, persistence with resume, curve export and table checks.

mod cell;
mod config;
mod output;
mod sweep;
mod tables;

pub use cell::{cell_seed, evaluate_cell, CellKey, CellResult, CellSpec, RunStats, TargetInstance};
pub use config::{parse_depths, ExperimentConfig, Targets, Task, CODE_VERSION};
pub use output::{
    emit_curves, layer_amplitude_dump, params_dump, BlockDump, CurveFormat, InputSnapshots, LayerAmplitudeDump, ParamsDump,
};
pub use sweep::{run_sweep, run_sweep_in, RunLine, SweepResult};
pub use tables::{reference_table, verify_tables, Case, ColumnCheck, DepthStatus, ReferenceTable, TableColumn, TableReport, TableRow};
