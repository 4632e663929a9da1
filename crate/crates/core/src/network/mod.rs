//! Network assembly: NMZI blocks, the nonlinear variational core with
//! single-qubit corrections, the linear-optics-programmed baseline, and the
//! depth/parameter accounting used to compare them.

mod accounting;
mod diagnostics;
mod linopt;
mod mesh;
mod nmzi;
mod qonn;

pub use accounting::{count_params, lo_depth, Architecture};
pub use diagnostics::{record_layer_amplitudes, record_lo_layer_amplitudes};
pub use linopt::{apply_lo_qonn, LinOptQonn};
pub use mesh::{MeshDescription, MeshLayer, NmziMesh};
pub use nmzi::{apply_nmzi_closed, nmzi_kernel, NmziParams};
pub use qonn::{apply_core, apply_qonn, corrections_identity};

use crate::fock::StateVector;
use crate::{Real, Result};

/// Anything that maps an input Fock state to an output state.
pub trait Circuit<T: Real> {
    fn apply(&self, input: &StateVector<T>) -> Result<StateVector<T>>;
}

impl<T: Real, F> Circuit<T> for F
where
    F: Fn(&StateVector<T>) -> Result<StateVector<T>>,
{
    fn apply(&self, input: &StateVector<T>) -> Result<StateVector<T>> {
        self(input)
    }
}

/// Nonlinear QONN with its parameters bound.
#[derive(Debug, Clone, Copy)]
pub struct Qonn<'a, T> {
    pub mesh: &'a NmziMesh<T>,
    pub chi: &'a [T],
    pub theta: &'a [T],
}

impl<T: Real> Circuit<T> for Qonn<'_, T> {
    fn apply(&self, input: &StateVector<T>) -> Result<StateVector<T>> {
        apply_qonn(input, self.mesh, self.chi, self.theta)
    }
}

/// Linear-optics-programmed QONN with its phases bound.
#[derive(Debug, Clone, Copy)]
pub struct LoQonn<'a, T> {
    pub net: &'a LinOptQonn,
    pub theta: &'a [T],
}

impl<T: Real> Circuit<T> for LoQonn<'_, T> {
    fn apply(&self, input: &StateVector<T>) -> Result<StateVector<T>> {
        apply_lo_qonn(input, self.net, self.theta)
    }
}
