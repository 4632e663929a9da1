use serde::{Deserialize, Serialize};

/// Which trainable architecture a count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Architecture {
    /// NMZI mesh trained through its nonlinearity strengths.
    Nonlinear,
    /// Universal interferometers trained through their phases.
    #[serde(rename = "linear-optics", alias = "linear")]
    Linear,
}

impl Architecture {
    pub fn label(self) -> &'static str {
        match self {
            Architecture::Nonlinear => "NL",
            Architecture::Linear => "LO",
        }
    }
}

/// Trainable parameters excluding single-qubit corrections:
/// `D(M-2) + 2 floor(D/2)` for the nonlinear mesh, `(D+1) M(M-1)` for the
/// linear-optics baseline.
pub fn count_params(modes: usize, depth: usize, kind: Architecture) -> usize {
    match kind {
        Architecture::Nonlinear => depth * modes.saturating_sub(2) + 2 * (depth / 2),
        Architecture::Linear => (depth + 1) * modes * modes.saturating_sub(1),
    }
}

/// Optical depth of the linear-optics baseline with `depth` nonlinear layers.
pub fn lo_depth(modes: usize, depth: usize) -> usize {
    (modes + 1) * (depth + 1)
}
