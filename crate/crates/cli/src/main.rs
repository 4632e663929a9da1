use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qonn::network::Architecture;
use qonn::runner::{
    layer_amplitude_dump, params_dump, parse_depths, run_sweep, verify_tables, ExperimentConfig, ReferenceTable,
    SweepResult, Targets, Task,
};
use qonn::tasks::LatticeFragment;

/// Environment variable holding the worker-thread count.
const WORKERS_VAR: &str = "QONN_WORKERS";

#[derive(Parser)]
#[command(name = "qonn", version, about = "Train and evaluate quantum optical neural networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// State preparation: GHZ-family, Haar-random or file targets.
    Prepare {
        #[command(flatten)]
        common: Common,
        /// Entanglement angles of GHZ-family targets.
        #[arg(long, value_delimiter = ',', value_parser = parse_angle)]
        alpha: Vec<f64>,
        /// Seeds of Haar-random targets.
        #[arg(long, value_delimiter = ',')]
        haar_seeds: Vec<u64>,
        /// Target states in amplitude dump format.
        #[arg(long)]
        state: Vec<PathBuf>,
    },
    /// Bell-state discrimination.
    Discriminate {
        #[command(flatten)]
        common: Common,
        /// Size of the state set, 4 or 6.
        #[arg(long)]
        states: Option<usize>,
    },
    /// Ground-state search for Heisenberg models.
    Vqe {
        #[command(flatten)]
        common: Common,
        /// Seeds of models sampled on the default lattice fragment.
        #[arg(long, value_delimiter = ',')]
        models: Vec<u64>,
        /// Model files `{spins, edges, fields}`.
        #[arg(long)]
        model_file: Vec<PathBuf>,
    },
    /// Run a sweep described entirely by a configuration file.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare sweep results with a reference table.
    Verify {
        #[arg(long)]
        table: ReferenceTable,
        /// Result files or sweep directories.
        results: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Amplitudes entering each nonlinear layer of a trained cell, or its parameters.
    DumpAmplitudes {
        /// Result file or sweep directory.
        result: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_parser = parse_angle)]
        phi_b: Option<f64>,
        #[arg(long)]
        target: Option<String>,
        /// Print the trained parameters grouped by layer instead.
        #[arg(long)]
        params: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ArchArg {
    Nonlinear,
    LinearOptics,
}

#[derive(Args)]
struct Common {
    /// Base configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    qubits: Option<usize>,
    /// Depths such as `3`, `1-12` or `1,3,5`.
    #[arg(long)]
    depths: Option<String>,
    /// Bias values, e.g. `0,pi/4,pi`.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle)]
    phi_b: Vec<f64>,
    #[arg(long, value_enum)]
    architecture: Option<ArchArg>,
    /// Hold single-qubit corrections at the identity.
    #[arg(long)]
    no_corrections: bool,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threshold: Option<f64>,
    /// Stop a series at the first depth meeting the threshold.
    #[arg(long)]
    stop_at_threshold: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Angles as plain numbers or multiples of pi: `0.3`, `pi`, `pi/4`, `3pi/4`.
fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().map_err(|_| format!("bad angle '{text}'"))?),
        None => (t.as_str(), 1.0),
    };
    let coef = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(c) => c.trim_end_matches('*').parse::<f64>().map_err(|_| format!("bad angle '{text}'"))?,
        None => return Err(format!("bad angle '{text}'")),
    };
    Ok(coef * PI / den)
}

fn base_config(common: &Common, task: Task, targets: Option<Targets>) -> qonn::Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => serde_json::from_str::<ExperimentConfig>(&fs::read_to_string(path)?)?,
        None => ExperimentConfig {
            task,
            architecture: Architecture::Nonlinear,
            qubits: None,
            depths: vec![1],
            phi_b: vec![0.0],
            targets: targets.clone().ok_or_else(|| qonn::Error::Config("no targets given".into()))?,
            corrections: true,
            optimizer: Default::default(),
            threshold: None,
            stop_at_threshold: false,
            output: None,
        },
    };
    if cfg.task != task {
        return Err(qonn::Error::Config(format!("configuration is for task {:?}", cfg.task)));
    }
    if let Some(t) = targets {
        cfg.targets = t;
    }
    if let Some(q) = common.qubits {
        cfg.qubits = Some(q);
    }
    if let Some(d) = &common.depths {
        cfg.depths = parse_depths(d)?;
    }
    if !common.phi_b.is_empty() {
        cfg.phi_b = common.phi_b.clone();
    }
    if let Some(a) = common.architecture {
        cfg.architecture = match a {
            ArchArg::Nonlinear => Architecture::Nonlinear,
            ArchArg::LinearOptics => Architecture::Linear,
        };
    }
    if common.no_corrections {
        cfg.corrections = false;
    }
    if let Some(r) = common.runs {
        cfg.optimizer.runs = r;
    }
    if let Some(b) = common.budget {
        cfg.optimizer.budget = b;
    }
    if let Some(s) = common.seed {
        cfg.optimizer.seed = s;
    }
    if common.threshold.is_some() {
        cfg.threshold = common.threshold;
    }
    if common.stop_at_threshold {
        cfg.stop_at_threshold = true;
    }
    if common.out.is_some() {
        cfg.output = common.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_sweep(result: &SweepResult) {
    println!("{:>5}  {:>9}  {:<28} {:>12}  {:>5}  {:>9}", "depth", "phi_b", "target", "best_cost", "P", "successes");
    for c in &result.cells {
        let cost = c.best_cost.map_or_else(|| "error".to_string(), |v| format!("{v:.3e}"));
        let succ = c.stats.as_ref().map_or_else(String::new, |s| format!("{}/{}", s.successes, s.runs));
        println!("{:>5}  {:>9.6}  {:<28} {:>12}  {:>5}  {:>9}", c.depth, c.phi_b, c.target, cost, c.params, succ);
        if let Some(e) = &c.error {
            println!("       error: {e}");
        }
    }
}

fn sweep_exit(cfg: &ExperimentConfig) -> qonn::Result<ExitCode> {
    let result = run_sweep(cfg)?;
    print_sweep(&result);
    Ok(if result.errored() == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run(cli: Cli) -> qonn::Result<ExitCode> {
    match cli.command {
        Command::Prepare { common, alpha, haar_seeds, state } => {
            let given = [!alpha.is_empty(), !haar_seeds.is_empty(), !state.is_empty()];
            if given.iter().filter(|&&g| g).count() > 1 {
                return Err(qonn::Error::Config("give only one of --alpha, --haar-seeds, --state".into()));
            }
            let targets = if !alpha.is_empty() {
                Some(Targets::Ghz { alpha })
            } else if !haar_seeds.is_empty() {
                Some(Targets::Haar { seeds: haar_seeds })
            } else if !state.is_empty() {
                Some(Targets::States { paths: state })
            } else {
                None
            };
            sweep_exit(&base_config(&common, Task::Prepare, targets)?)
        }
        Command::Discriminate { common, states } => {
            let targets = match (states, &common.config) {
                (Some(s), _) => Some(Targets::Bell { states: s }),
                (None, None) => Some(Targets::Bell { states: 4 }),
                (None, Some(_)) => None,
            };
            sweep_exit(&base_config(&common, Task::Discriminate, targets)?)
        }
        Command::Vqe { common, models, model_file } => {
            let targets = if models.is_empty() && model_file.is_empty() {
                None
            } else {
                Some(Targets::Heisenberg { seeds: models, fragment: LatticeFragment::default(), model_files: model_file })
            };
            sweep_exit(&base_config(&common, Task::Vqe, targets)?)
        }
        Command::Sweep { config, out } => {
            let mut cfg = ExperimentConfig::from_json(&fs::read_to_string(config)?)?;
            if out.is_some() {
                cfg.output = out;
            }
            sweep_exit(&cfg)
        }
        Command::Verify { table, results, json } => {
            let loaded = results.iter().map(|p| SweepResult::load(p)).collect::<qonn::Result<Vec<_>>>()?;
            let report = verify_tables(&loaded, table);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{report}");
            }
            Ok(if report.mismatches() == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::DumpAmplitudes { result, depth, phi_b, target, params, out } => {
            let result = SweepResult::load(&result)?;
            let cell = result
                .cells
                .iter()
                .find(|c| {
                    c.depth == depth
                        && c.error.is_none()
                        && phi_b.is_none_or(|p| (c.phi_b - p).abs() < 1e-9)
                        && target.as_ref().is_none_or(|t| &c.target == t)
                })
                .ok_or_else(|| qonn::Error::Config("no trained cell matches the selection".into()))?;
            let text = if params {
                serde_json::to_string_pretty(&params_dump(cell)?)?
            } else {
                serde_json::to_string_pretty(&layer_amplitude_dump(cell)?)?
            };
            match out {
                Some(path) => fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var(WORKERS_VAR) {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("qonn: {e}");
                }
            }
            _ => eprintln!("qonn: ignoring {WORKERS_VAR}={n}"),
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qonn: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::parse_angle;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert!(parse_angle("tau").is_err());
    }
}
