use crate::fock::StateVector;
use crate::network::{nmzi_kernel, NmziMesh};
use crate::optics::{apply_pair_kernel_mut, two_mode_kernel, TwoModeUnitary};
use crate::{Error, Real, Result};

fn check_modes<T: Real>(state: &StateVector<T>, mesh: &NmziMesh<T>) -> Result<()> {
    if state.basis().modes() != mesh.modes() {
        return Err(Error::shape(format!(
            "state has {} modes, mesh has {}",
            state.basis().modes(),
            mesh.modes()
        )));
    }
    Ok(())
}

pub(crate) fn apply_core_mut<T: Real>(state: &mut StateVector<T>, mesh: &NmziMesh<T>, chi: &[T]) -> Result<()> {
    check_modes(state, mesh)?;
    let photons = state.basis().photons();
    for layer in mesh.bind(chi)? {
        for (pair, params) in layer {
            apply_pair_kernel_mut(state, pair, &nmzi_kernel(&params, photons))?;
        }
    }
    Ok(())
}

/// Apply the NMZI layers in order, first layer first.
pub fn apply_core<T: Real>(state: &StateVector<T>, mesh: &NmziMesh<T>, chi: &[T]) -> Result<StateVector<T>> {
    let mut out = state.clone();
    apply_core_mut(&mut out, mesh, chi)?;
    Ok(out)
}

/// Apply one column of per-qubit MZIs; `theta` holds `(theta1, theta2)` per qubit.
pub(crate) fn apply_corrections_mut<T: Real>(state: &mut StateVector<T>, theta: &[T]) -> Result<()> {
    let photons = state.basis().photons();
    for (q, pair) in theta.chunks_exact(2).enumerate() {
        let kernel = two_mode_kernel(&TwoModeUnitary::mzi(pair[0], pair[1]), photons);
        apply_pair_kernel_mut(state, (2 * q, 2 * q + 1), &kernel)?;
    }
    Ok(())
}

pub(crate) fn check_qonn_shape<T: Real>(state: &StateVector<T>, mesh: &NmziMesh<T>, theta: &[T]) -> Result<()> {
    check_modes(state, mesh)?;
    let qubits = mesh.qubits();
    if state.basis().photons() != qubits {
        return Err(Error::shape(format!(
            "QONN on {} modes expects {} photons, state has {}",
            mesh.modes(),
            qubits,
            state.basis().photons()
        )));
    }
    if theta.len() != 4 * qubits {
        return Err(Error::ParamCount { expected: 4 * qubits, got: theta.len() });
    }
    Ok(())
}

/// Input corrections, core, output corrections.
///
/// `theta` always holds `4N` phases: input `(theta1, theta2)` per qubit, then
/// output. Correction settings of zero are the identity.
pub fn apply_qonn<T: Real>(
    state: &StateVector<T>,
    mesh: &NmziMesh<T>,
    chi: &[T],
    theta: &[T],
) -> Result<StateVector<T>> {
    check_qonn_shape(state, mesh, theta)?;
    let half = theta.len() / 2;
    let mut out = state.clone();
    apply_corrections_mut(&mut out, &theta[..half])?;
    apply_core_mut(&mut out, mesh, chi)?;
    apply_corrections_mut(&mut out, &theta[half..])?;
    Ok(out)
}

/// Correction phases that leave every qubit untouched.
pub fn corrections_identity<T: Real>(qubits: usize) -> Vec<T> {
    vec![T::zero(); 4 * qubits]
}
