//! Fock-space bookkeeping: basis enumeration, amplitude vectors and the
//! dual-rail qubit code.

mod basis;
mod dualrail;
mod state;

pub use basis::{FockBasis, PairTable, DEFAULT_DIMENSION_CAP};
pub use dualrail::{parse_bits, DualRail, Projection, DEGENERATE_WEIGHT};
pub use state::{AmplitudeRecord, StateVector};
