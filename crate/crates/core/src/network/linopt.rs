use serde::{Deserialize, Serialize};

use crate::fock::StateVector;
use crate::network::count_params;
use crate::network::Architecture;
use crate::optics::{
    apply_ns_mut, apply_pair_kernel_mut, clements_mesh, clements_pairs, two_mode_kernel, NsGate, TransferMatrix,
    TwoModeUnitary,
};
use crate::{Error, Real, Result};

/// Baseline QONN: universal interferometers `V(1) .. V(D+1)` separated by
/// static `chi = pi` NS layers on every mode.
///
/// Each interferometer is a rectangular mesh whose `M(M-1)` MZI phases are
/// trainable; its output phases are fixed at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinOptQonn {
    pub modes: usize,
    pub depth: usize,
}

impl LinOptQonn {
    pub fn new(modes: usize, depth: usize) -> Result<Self> {
        if modes < 2 {
            return Err(Error::shape(format!("need at least two modes, got {modes}")));
        }
        Ok(LinOptQonn { modes, depth })
    }

    pub fn interferometers(&self) -> usize {
        self.depth + 1
    }

    pub fn phases_per_interferometer(&self) -> usize {
        self.modes * (self.modes - 1)
    }

    pub fn param_count(&self) -> usize {
        count_params(self.modes, self.depth, Architecture::Linear)
    }

    fn check(&self, theta_len: usize) -> Result<()> {
        let expected = self.param_count();
        if theta_len != expected {
            return Err(Error::ParamCount { expected, got: theta_len });
        }
        Ok(())
    }

    /// Transfer matrix of each interferometer.
    pub fn transfer_matrices<T: Real>(&self, theta: &[T]) -> Result<Vec<TransferMatrix<T>>> {
        self.check(theta.len())?;
        theta
            .chunks_exact(self.phases_per_interferometer())
            .map(|chunk| {
                let mut full = chunk.to_vec();
                full.extend(std::iter::repeat_n(T::zero(), self.modes));
                clements_mesh(&full, self.modes)
            })
            .collect()
    }
}

pub(crate) fn apply_interferometer_mut<T: Real>(state: &mut StateVector<T>, theta: &[T]) -> Result<()> {
    let modes = state.basis().modes();
    let photons = state.basis().photons();
    for (&pair, t) in clements_pairs(modes).iter().zip(theta.chunks_exact(2)) {
        let kernel = two_mode_kernel(&TwoModeUnitary::mzi(t[0], t[1]), photons);
        apply_pair_kernel_mut(state, pair, &kernel)?;
    }
    Ok(())
}

pub(crate) fn apply_ns_layer_mut<T: Real>(state: &mut StateVector<T>) -> Result<()> {
    for mode in 0..state.basis().modes() {
        apply_ns_mut(state, &NsGate::new(T::PI(), mode))?;
    }
    Ok(())
}

/// Apply the alternation `V(1), NS(pi), V(2), ..., V(D+1)`.
pub fn apply_lo_qonn<T: Real>(state: &StateVector<T>, net: &LinOptQonn, theta: &[T]) -> Result<StateVector<T>> {
    if state.basis().modes() != net.modes {
        return Err(Error::shape(format!(
            "state has {} modes, network has {}",
            state.basis().modes(),
            net.modes
        )));
    }
    net.check(theta.len())?;
    let mut out = state.clone();
    for (l, chunk) in theta.chunks_exact(net.phases_per_interferometer()).enumerate() {
        if l > 0 {
            apply_ns_layer_mut(&mut out)?;
        }
        apply_interferometer_mut(&mut out, chunk)?;
    }
    Ok(out)
}
