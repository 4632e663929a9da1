use std::f64::consts::PI;
use std::fs;

use qonn::network::Architecture;
use qonn::optimizer::OptimizerConfig;
use qonn::runner::{
    cell_seed, emit_curves, layer_amplitude_dump, params_dump, parse_depths, run_sweep, run_sweep_in, verify_tables,
    CellKey, CurveFormat, DepthStatus, ExperimentConfig, ReferenceTable, RunLine, SweepResult, Targets, Task,
};
use qonn::tasks::LatticeFragment;
use qonn::Error;

fn bell_config(runs: usize) -> ExperimentConfig {
    ExperimentConfig {
        task: Task::Discriminate,
        architecture: Architecture::Nonlinear,
        qubits: None,
        depths: vec![1],
        phi_b: vec![0.0],
        targets: Targets::Bell { states: 4 },
        corrections: true,
        optimizer: OptimizerConfig { runs, seed: 17, ..Default::default() },
        threshold: None,
        stop_at_threshold: false,
        output: None,
    }
}

#[test]
fn depth_specifications() {
    assert_eq!(parse_depths("3").unwrap(), vec![3]);
    assert_eq!(parse_depths("1-4").unwrap(), vec![1, 2, 3, 4]);
    assert_eq!(parse_depths("1,3, 5-6").unwrap(), vec![1, 3, 5, 6]);
    assert!(parse_depths("4-2").is_err());
    assert!(parse_depths("x").is_err());
    assert!(parse_depths("").unwrap().is_empty());
}

#[test]
fn invalid_configurations() {
    let mut c = bell_config(1);
    c.depths.clear();
    assert!(matches!(c.validate(), Err(Error::Config(_))));
    let mut c = bell_config(1);
    c.phi_b = vec![7.0];
    assert!(c.validate().is_err());
    let mut c = bell_config(1);
    c.targets = Targets::Ghz { alpha: vec![0.1] };
    assert!(c.validate().is_err());
    let mut c = bell_config(1);
    c.targets = Targets::Bell { states: 5 };
    assert!(c.validate().is_err());
    let mut c = bell_config(1);
    c.qubits = Some(3);
    assert!(c.validate().is_err());
    let mut c = bell_config(1);
    c.task = Task::Prepare;
    c.targets = Targets::Ghz { alpha: vec![0.3] };
    assert!(c.validate().is_err(), "preparation needs an explicit qubit count");
    c.qubits = Some(2);
    assert!(c.validate().is_ok());
    assert!(run_sweep(&{
        let mut c = bell_config(1);
        c.depths.clear();
        c
    })
    .is_err());
}

#[test]
fn configuration_json_and_hash() {
    let text = r#"{
        "task": "vqe",
        "depths": [1, 2],
        "phi_b": [1.5707963267948966],
        "targets": {"kind": "heisenberg", "seeds": [1, 2]}
    }"#;
    let c = ExperimentConfig::from_json(text).unwrap();
    assert_eq!(c.architecture, Architecture::Nonlinear);
    assert_eq!(c.resolved_qubits().unwrap(), 5);
    assert_eq!(c.threshold(), 1e-3);
    assert!(c.corrections);
    assert_eq!(c.optimizer, OptimizerConfig::default());
    assert!(matches!(&c.targets, Targets::Heisenberg { fragment, .. } if *fragment == LatticeFragment::default()));
    let back = ExperimentConfig::from_json(&c.to_json().unwrap()).unwrap();
    assert_eq!(back, c);
    let mut moved = c.clone();
    moved.output = Some("elsewhere".into());
    assert_eq!(moved.hash(), c.hash());
    let mut other = c.clone();
    other.optimizer.seed += 1;
    assert_ne!(other.hash(), c.hash());
    let lo = r#"{"task": "discriminate", "architecture": "linear-optics", "depths": [0],
                 "phi_b": [0.5, 1.0], "targets": {"kind": "bell", "states": 6}}"#;
    let lo = ExperimentConfig::from_json(lo).unwrap();
    assert_eq!(lo.swept_phi(), vec![0.0]);
}

#[test]
fn cell_seeds_depend_on_every_coordinate() {
    let key = |depth, phi_b, target: &str| CellKey { depth, phi_b, target: target.to_string() };
    let base = cell_seed(1, Task::Prepare, Architecture::Nonlinear, 3, &key(2, 0.5, "ghz:alpha=0.1"));
    assert_eq!(base, cell_seed(1, Task::Prepare, Architecture::Nonlinear, 3, &key(2, 0.5, "ghz:alpha=0.1")));
    let variants = [
        cell_seed(2, Task::Prepare, Architecture::Nonlinear, 3, &key(2, 0.5, "ghz:alpha=0.1")),
        cell_seed(1, Task::Vqe, Architecture::Nonlinear, 3, &key(2, 0.5, "ghz:alpha=0.1")),
        cell_seed(1, Task::Prepare, Architecture::Linear, 3, &key(2, 0.5, "ghz:alpha=0.1")),
        cell_seed(1, Task::Prepare, Architecture::Nonlinear, 4, &key(2, 0.5, "ghz:alpha=0.1")),
        cell_seed(1, Task::Prepare, Architecture::Nonlinear, 3, &key(3, 0.5, "ghz:alpha=0.1")),
        cell_seed(1, Task::Prepare, Architecture::Nonlinear, 3, &key(2, 0.25, "ghz:alpha=0.1")),
        cell_seed(1, Task::Prepare, Architecture::Nonlinear, 3, &key(2, 0.5, "ghz:alpha=0.2")),
    ];
    assert!(variants.iter().all(|&v| v != base));
}

#[test]
fn persisted_sweep_is_reproducible_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    let config = bell_config(4);
    let a = run_sweep_in(&config, &first).unwrap();
    let b = run_sweep_in(&config, &second).unwrap();
    assert_eq!(a, b);
    for name in ["result.json", "curves.csv", "params.json", "runs.jsonl", "config.json"] {
        assert_eq!(fs::read(first.join(name)).unwrap(), fs::read(second.join(name)).unwrap(), "{name}");
    }
    // resuming reads the stored cells back and rewrites identical files
    let stamp = fs::read(first.join("result.json")).unwrap();
    let resumed = run_sweep_in(&config, &first).unwrap();
    assert_eq!(resumed, a);
    assert_eq!(fs::read(first.join("result.json")).unwrap(), stamp);
    assert!(first.join("cells/series000-depth001.json").exists());
    // a different sweep refuses to reuse the directory
    let mut changed = config.clone();
    changed.optimizer.seed = 99;
    assert!(matches!(run_sweep_in(&changed, &first), Err(Error::Config(_))));

    let csv = fs::read_to_string(first.join("curves.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "depth,phi_b,target,best_cost,params,runs");
    assert_eq!(csv.lines().count(), 2);
    let lines: Vec<RunLine> = fs::read_to_string(first.join("runs.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.cell_seed == a.cells[0].seed && l.config_hash == config.hash()));
    let loaded = SweepResult::load(&first).unwrap();
    assert_eq!(loaded, a);
    assert_eq!(SweepResult::from_json(&a.to_json().unwrap()).unwrap(), a);
}

#[test]
fn in_memory_and_persisted_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let config = bell_config(3);
    let mut persisted = config.clone();
    persisted.output = Some(dir.path().to_path_buf());
    assert_eq!(run_sweep(&config).unwrap(), run_sweep(&persisted).unwrap());
}

#[test]
fn dumps_of_a_trained_cell() {
    let result = run_sweep(&bell_config(4)).unwrap();
    let cell = &result.cells[0];
    assert_eq!(cell.params, 2);
    assert_eq!(cell.trainable, 10);
    assert_eq!(cell.best_params.len(), 10);
    assert!(cell.best_cost.unwrap() <= 1e-7, "{:?}", cell.best_cost);
    let stats = cell.stats.as_ref().unwrap();
    assert_eq!(stats.runs, 4);
    assert!(stats.successes >= 1 && stats.successes <= 4);

    let dump = params_dump(cell).unwrap();
    assert_eq!(dump.layers.len(), 1);
    assert_eq!(dump.layers[0].len(), 1);
    assert_eq!(dump.layers[0][0].modes, (1, 2));
    assert_eq!(dump.corrections_in.len(), 2);
    assert_eq!(dump.corrections_out.len(), 2);

    let amps = layer_amplitude_dump(cell).unwrap();
    assert_eq!(amps.basis.len(), 10);
    assert_eq!(amps.inputs.len(), 4);
    assert!(amps.inputs.iter().all(|i| i.layers.len() == 1));

    let dir = tempfile::tempdir().unwrap();
    let path = emit_curves(&result, dir.path(), CurveFormat::Json).unwrap();
    assert_eq!(SweepResult::from_json(&fs::read_to_string(path).unwrap()).unwrap(), result);
}

#[test]
fn bell_depth_read_off() {
    let result = run_sweep(&bell_config(4)).unwrap();
    let report = verify_tables(&[result], ReferenceTable::III);
    assert!(report.arithmetic_ok());
    let four = report.checks.iter().find(|c| c.row == "NL (phi_b=0)" && c.expected_params == Some(2)).unwrap();
    assert_eq!(four.depth, DepthStatus::Match { depth: 1 });
    assert!(report.checks.iter().filter(|c| c.row != "NL (phi_b=0)").all(|c| c.depth == DepthStatus::NotCovered));
    assert!(report.to_string().contains("depth 1 matches"));
}

#[test]
fn stop_at_threshold_skips_deeper_cells() {
    let mut c = bell_config(4);
    c.depths = vec![1, 2, 3];
    c.stop_at_threshold = true;
    let r = run_sweep(&c).unwrap();
    assert_eq!(r.cells.len(), 1);
    c.stop_at_threshold = false;
    c.optimizer.runs = 1;
    c.optimizer.budget = 200;
    assert_eq!(run_sweep(&c).unwrap().cells.len(), 3);
}

#[test]
fn baseline_and_vqe_cells() {
    let mut lo = bell_config(1);
    lo.architecture = Architecture::Linear;
    lo.depths = vec![0];
    lo.optimizer.budget = 2000;
    let r = run_sweep(&lo).unwrap();
    let cell = &r.cells[0];
    assert_eq!(cell.params, 12);
    assert_eq!(cell.d_lo, Some(5));
    // one interferometer is linear optics only: at most half of the Bell states get through
    assert!(cell.best_cost.unwrap() >= 0.5 - 1e-9);

    let vqe = ExperimentConfig {
        task: Task::Vqe,
        architecture: Architecture::Nonlinear,
        qubits: None,
        depths: vec![1],
        phi_b: vec![PI / 2.0],
        targets: Targets::Heisenberg { seeds: vec![3], fragment: LatticeFragment::default(), model_files: vec![] },
        corrections: true,
        optimizer: OptimizerConfig { runs: 1, budget: 1500, ..Default::default() },
        threshold: None,
        stop_at_threshold: false,
        output: None,
    };
    let r = run_sweep(&vqe).unwrap();
    let cell = &r.cells[0];
    assert_eq!(cell.target, "heisenberg:seed=3");
    let (exact, best) = (cell.exact_energy.unwrap(), cell.best_energy.unwrap());
    assert!((cell.best_cost.unwrap() - (best - exact)).abs() < 1e-12);
    assert!(best >= exact - 1e-12);
}

#[test]
fn error_cells_are_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let mut c = bell_config(1);
    c.task = Task::Vqe;
    c.targets = Targets::Heisenberg { seeds: vec![], fragment: LatticeFragment::default(), model_files: vec![missing] };
    c.qubits = Some(5);
    assert!(run_sweep(&c).is_err());
    // a model the mesh cannot host becomes an errored cell
    let file = dir.path().join("big.json");
    let spins = 11;
    fs::write(
        &file,
        format!(r#"{{"spins": {spins}, "edges": [[0, 1, 1.0]], "fields": {:?}}}"#, vec![0.0; spins]),
    )
    .unwrap();
    c.targets = Targets::Heisenberg { seeds: vec![], fragment: LatticeFragment::default(), model_files: vec![file] };
    c.qubits = Some(spins);
    let r = run_sweep(&c).unwrap();
    assert_eq!(r.errored(), 1);
    assert!(r.cells[0].best_cost.is_none());
}
