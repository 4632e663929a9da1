//! Linear and Kerr-type optical elements acting on Fock states.
//!
//! Two-mode elements are lifted to the full Fock space through per-pair
//! coupling kernels; arbitrary multimode transfer matrices go through
//! matrix permanents and serve as the independent reference path.

mod clements;
mod lift;
mod matrix;
mod multimode;
mod ns;
mod permanent;

pub use clements::{clements_mesh, clements_pairs, clements_param_count, random_unitary};
pub use lift::{apply_pair_kernel, apply_two_mode, two_mode_kernel, PairKernel};
pub(crate) use lift::apply_pair_kernel_mut;
pub(crate) use ns::{apply_ns_mut, nonlinear_phases};
pub use matrix::{TransferMatrix, TwoModeUnitary, BUILD_TOLERANCE, EXTERNAL_TOLERANCE};
pub use multimode::apply_multimode;
pub use ns::{apply_ns, apply_phase, NsGate};
pub use permanent::{permanent, MAX_PERMANENT_SIZE};
