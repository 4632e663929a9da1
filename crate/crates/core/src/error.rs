use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Fock space of dimension {dim} exceeds the cap of {cap} basis states")]
    DimensionOverflow { dim: u128, cap: usize },

    #[error("states live in different Fock bases ({left_modes} modes/{left_photons} photons vs {right_modes}/{right_photons})")]
    BasisMismatch {
        left_modes: usize,
        left_photons: usize,
        right_modes: usize,
        right_photons: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },

    #[error("dual-rail projection is degenerate (weight {0:e})")]
    DegenerateProjection(f64),

    #[error("transfer matrix is not unitary (deviation {0:e})")]
    NonUnitary(f64),

    #[error("permanent of a {0}x{0} matrix is beyond the supported size")]
    PermanentTooLarge(usize),

    #[error("Hamiltonian on {0} spins is beyond the supported size")]
    TooManySpins(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
