use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cell::CellResult;
use super::config::Task;
use super::sweep::SweepResult;
use crate::network::{count_params, lo_depth, Architecture};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReferenceTable {
    I,
    II,
    III,
    IV,
}

impl std::str::FromStr for ReferenceTable {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(ReferenceTable::I),
            "II" | "2" => Ok(ReferenceTable::II),
            "III" | "3" => Ok(ReferenceTable::III),
            "IV" | "4" => Ok(ReferenceTable::IV),
            other => Err(crate::Error::Config(format!("unknown table '{other}'"))),
        }
    }
}

/// Which sweep cells a table column refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Case {
    /// Maximally entangled GHZ-family state.
    Ghz { qubits: usize },
    /// Haar-random states.
    Haar { qubits: usize },
    Bell { states: usize },
    Heisenberg { qubits: usize },
}

impl Case {
    fn qubits(self) -> usize {
        match self {
            Case::Ghz { qubits } | Case::Haar { qubits } | Case::Heisenberg { qubits } => qubits,
            Case::Bell { .. } => 2,
        }
    }

    fn task(self) -> Task {
        match self {
            Case::Ghz { .. } | Case::Haar { .. } => Task::Prepare,
            Case::Bell { .. } => Task::Discriminate,
            Case::Heisenberg { .. } => Task::Vqe,
        }
    }

    fn matches(self, cell: &CellResult) -> bool {
        if cell.task != self.task() || cell.qubits != self.qubits() {
            return false;
        }
        match self {
            Case::Ghz { .. } => cell
                .target
                .strip_prefix("ghz:alpha=")
                .and_then(|a| a.parse::<f64>().ok())
                .is_some_and(|a| (a - FRAC_PI_4).abs() < 1e-9),
            Case::Haar { .. } => cell.target.starts_with("haar:"),
            Case::Bell { states } => cell.target == format!("bell-{states}"),
            Case::Heisenberg { .. } => cell.target.starts_with("heisenberg:"),
        }
    }
}

/// One column entry of a table row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableColumn {
    pub case: Case,
    /// `None` where the table has no entry.
    pub depth: Option<usize>,
    pub d_lo: usize,
    pub params: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub architecture: Architecture,
    pub phi_b: f64,
    pub corrections: bool,
    pub columns: Vec<TableColumn>,
}

fn row(label: &str, architecture: Architecture, phi_b: f64, corrections: bool, columns: Vec<TableColumn>) -> TableRow {
    TableRow { label: label.to_string(), architecture, phi_b, corrections, columns }
}

fn col(case: Case, depth: Option<usize>, d_lo: usize, params: Option<usize>) -> TableColumn {
    TableColumn { case, depth, d_lo, params }
}

/// Rows of a reference table.
pub fn reference_table(table: ReferenceTable) -> Vec<TableRow> {
    use Architecture::{Linear, Nonlinear};
    match table {
        ReferenceTable::I => {
            let (g3, g4) = (Case::Ghz { qubits: 3 }, Case::Ghz { qubits: 4 });
            vec![
                row("NL (phi_b=0)", Nonlinear, 0.0, true, vec![col(g3, Some(1), 0, Some(4)), col(g4, None, 0, None)]),
                row("NL (phi_b=pi)", Nonlinear, PI, true, vec![col(g3, Some(5), 0, Some(24)), col(g4, Some(9), 0, Some(62))]),
                row("LO", Linear, 0.0, false, vec![col(g3, Some(1), 14, Some(60)), col(g4, Some(2), 27, Some(168))]),
            ]
        }
        ReferenceTable::II => {
            let h = Case::Haar { qubits: 3 };
            vec![
                row("NL (phi_b=pi)", Nonlinear, PI, true, vec![col(h, Some(11), 0, Some(54))]),
                row("LO", Linear, 0.0, false, vec![col(h, Some(4), 35, Some(150))]),
            ]
        }
        ReferenceTable::III => {
            let (b4, b6) = (Case::Bell { states: 4 }, Case::Bell { states: 6 });
            vec![
                row("NL (phi_b=0)", Nonlinear, 0.0, true, vec![col(b4, Some(1), 0, Some(2)), col(b6, Some(5), 0, Some(14))]),
                row("NL (phi_b=pi)", Nonlinear, PI, true, vec![col(b4, Some(3), 0, Some(8)), col(b6, Some(11), 0, Some(32))]),
                row(
                    "NL (phi_b=pi, no MZIs)",
                    Nonlinear,
                    PI,
                    false,
                    vec![col(b4, Some(19), 0, Some(56)), col(b6, Some(23), 0, Some(68))],
                ),
                row("LO", Linear, 0.0, false, vec![col(b4, Some(1), 10, Some(24)), col(b6, Some(3), 20, Some(48))]),
            ]
        }
        ReferenceTable::IV => {
            let h = Case::Heisenberg { qubits: 5 };
            vec![
                row("NL (phi_b=pi/2)", Nonlinear, FRAC_PI_2, true, vec![col(h, Some(7), 0, Some(62))]),
                row("LO", Linear, 0.0, false, vec![col(h, Some(1), 22, Some(180))]),
            ]
        }
    }
}

/// Outcome of comparing the trained minimal depth with the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DepthStatus {
    Match { depth: usize },
    Mismatch { expected: usize, observed: usize },
    /// Matching cells exist but none met the threshold.
    NotReached { max_depth: usize },
    /// No sweep cell covers this entry.
    NotCovered,
    /// The table has no depth entry here.
    NoEntry { observed: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnCheck {
    pub row: String,
    pub case: Case,
    pub expected_params: Option<usize>,
    pub computed_params: Option<usize>,
    pub expected_d_lo: usize,
    pub computed_d_lo: usize,
    pub arithmetic_ok: bool,
    pub depth: DepthStatus,
    /// `(depth, best cost)` of every matching cell, worst target per depth.
    pub curve: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: ReferenceTable,
    pub checks: Vec<ColumnCheck>,
}

impl TableReport {
    pub fn arithmetic_ok(&self) -> bool {
        self.checks.iter().all(|c| c.arithmetic_ok)
    }

    pub fn mismatches(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| !c.arithmetic_ok || matches!(c.depth, DepthStatus::Mismatch { .. }))
            .count()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Table {:?}", self.table)?;
        for c in &self.checks {
            let params = match (c.expected_params, c.computed_params) {
                (Some(e), Some(g)) => format!("P {g} (table {e})"),
                _ => "P -".to_string(),
            };
            let depth = match &c.depth {
                DepthStatus::Match { depth } => format!("depth {depth} matches"),
                DepthStatus::Mismatch { expected, observed } => format!("depth {observed}, table {expected}"),
                DepthStatus::NotReached { max_depth } => format!("threshold not reached up to depth {max_depth}"),
                DepthStatus::NotCovered => "not covered by the sweeps".to_string(),
                DepthStatus::NoEntry { observed } => match observed {
                    Some(d) => format!("no table entry, observed depth {d}"),
                    None => "no table entry".to_string(),
                },
            };
            writeln!(
                f,
                "  {:<24} {:<28} {:<18} D_LO {} (table {})  arithmetic {}  {}",
                c.row,
                format!("{:?}", c.case),
                params,
                c.computed_d_lo,
                c.expected_d_lo,
                if c.arithmetic_ok { "ok" } else { "MISMATCH" },
                depth
            )?;
        }
        Ok(())
    }
}

/// First depth at which every matching target meets the threshold, with the
/// full curve of worst-target costs per depth.
fn observed_depth(results: &[SweepResult], row: &TableRow, case: Case) -> (Option<usize>, Vec<(usize, f64)>, bool) {
    let mut curve: Vec<(usize, f64, bool)> = Vec::new();
    for result in results {
        for cell in &result.cells {
            let phi_ok = row.architecture == Architecture::Linear || (cell.phi_b - row.phi_b).abs() < 1e-9;
            let corr_ok = row.architecture == Architecture::Linear || cell.corrections == row.corrections;
            if cell.architecture != row.architecture || !phi_ok || !corr_ok || !case.matches(cell) {
                continue;
            }
            let cost = cell.best_cost.unwrap_or(f64::INFINITY);
            let pass = cell.succeeded(result.threshold);
            match curve.iter_mut().find(|(d, _, _)| *d == cell.depth) {
                Some(entry) => {
                    entry.1 = entry.1.max(cost);
                    entry.2 &= pass;
                }
                None => curve.push((cell.depth, cost, pass)),
            }
        }
    }
    curve.sort_by_key(|e| e.0);
    let first = curve.iter().find(|e| e.2).map(|e| e.0);
    let covered = !curve.is_empty();
    (first, curve.into_iter().map(|(d, c, _)| (d, c)).collect(), covered)
}

/// Check a table's arithmetic columns and, where sweeps cover it, its depths.
pub fn verify_tables(results: &[SweepResult], table: ReferenceTable) -> TableReport {
    let mut checks = Vec::new();
    for row in reference_table(table) {
        for column in &row.columns {
            let modes = 2 * column.case.qubits();
            let computed_params = column.depth.map(|d| count_params(modes, d, row.architecture));
            let computed_d_lo = match (row.architecture, column.depth) {
                (Architecture::Linear, Some(d)) => lo_depth(modes, d),
                _ => 0,
            };
            let arithmetic_ok = computed_params == column.params && computed_d_lo == column.d_lo;
            let (observed, curve, covered) = observed_depth(results, &row, column.case);
            let depth = match (column.depth, observed) {
                (None, observed) => DepthStatus::NoEntry { observed },
                (Some(_), _) if !covered => DepthStatus::NotCovered,
                (Some(e), Some(o)) if e == o => DepthStatus::Match { depth: o },
                (Some(e), Some(o)) => DepthStatus::Mismatch { expected: e, observed: o },
                (Some(_), None) => DepthStatus::NotReached { max_depth: curve.last().map_or(0, |c| c.0) },
            };
            checks.push(ColumnCheck {
                row: row.label.clone(),
                case: column.case,
                expected_params: column.params,
                computed_params,
                expected_d_lo: column.d_lo,
                computed_d_lo,
                arithmetic_ok,
                depth,
                curve,
            });
        }
    }
    TableReport { table, checks }
}
