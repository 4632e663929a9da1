
use crate::fock::StateVector;
use crate::network::linopt::{apply_interferometer_mut, apply_ns_layer_mut};
use crate::network::qonn::{apply_corrections_mut, check_qonn_shape};
use crate::network::{LinOptQonn, NmziMesh};
use crate::optics::{apply_pair_kernel_mut, nonlinear_phases, two_mode_kernel, PairKernel, TwoModeUnitary};
use crate::{Error, Real, Result};

fn magnitudes<T: Real>(state: &StateVector<T>) -> Vec<T> {
    state.amplitudes().iter().map(|c| c.norm()).collect()
}

/// Second half of an NMZI: NS gates and bias inside the arms, then the
/// closing coupler.
fn arms_then_coupler<T: Real>(chi1: T, chi2: T, phi_b: T, photons: usize) -> PairKernel<T> {
    let dc = two_mode_kernel(&TwoModeUnitary::<T>::dc(), photons);
    let ns1 = nonlinear_phases(chi1, photons);
    let ns2 = nonlinear_phases(chi2, photons);
    PairKernel::from_fn(photons, |s, p_in, p_out| {
        let arm = ns1[p_in] * ns2[s - p_in] * T::cis(phi_b * T::lit(p_in as f64));
        dc.blocks[s][p_out * (s + 1) + p_in] * arm
    })
}

/// Amplitude magnitudes `|c_t|` of the state entering each nonlinear layer,
/// that is, after the opening coupler column of every NMZI layer.
pub fn record_layer_amplitudes<T: Real>(
    state: &StateVector<T>,
    mesh: &NmziMesh<T>,
    chi: &[T],
    theta: &[T],
) -> Result<Vec<Vec<T>>> {
    check_qonn_shape(state, mesh, theta)?;
    let photons = state.basis().photons();
    let dc = two_mode_kernel(&TwoModeUnitary::<T>::dc(), photons);
    let mut cur = state.clone();
    apply_corrections_mut(&mut cur, &theta[..theta.len() / 2])?;
    let mut snapshots = Vec::with_capacity(mesh.depth());
    for layer in mesh.bind(chi)? {
        for (pair, _) in &layer {
            apply_pair_kernel_mut(&mut cur, *pair, &dc)?;
        }
        snapshots.push(magnitudes(&cur));
        for (pair, p) in &layer {
            apply_pair_kernel_mut(&mut cur, *pair, &arms_then_coupler(p.chi1, p.chi2, p.phi_b, photons))?;
        }
    }
    Ok(snapshots)
}

/// Amplitude magnitudes entering each static NS layer of the baseline.
pub fn record_lo_layer_amplitudes<T: Real>(
    state: &StateVector<T>,
    net: &LinOptQonn,
    theta: &[T],
) -> Result<Vec<Vec<T>>> {
    if state.basis().modes() != net.modes {
        return Err(Error::shape("state and network mode counts differ"));
    }
    if theta.len() != net.param_count() {
        return Err(Error::ParamCount { expected: net.param_count(), got: theta.len() });
    }
    let mut cur = state.clone();
    let mut snapshots = Vec::with_capacity(net.depth);
    for (l, chunk) in theta.chunks_exact(net.phases_per_interferometer()).enumerate() {
        if l > 0 {
            snapshots.push(magnitudes(&cur));
            apply_ns_layer_mut(&mut cur)?;
        }
        apply_interferometer_mut(&mut cur, chunk)?;
    }
    Ok(snapshots)
}
