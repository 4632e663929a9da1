use num_complex::Complex;
use num_traits::Zero;

use super::{permanent, TransferMatrix, EXTERNAL_TOLERANCE};
use crate::fock::StateVector;
use crate::scalar::factorial;
use crate::{Error, Real, Result};

fn repeated_modes(occupation: &[u8]) -> Vec<usize> {
    occupation
        .iter()
        .enumerate()
        .flat_map(|(m, &n)| std::iter::repeat_n(m, n as usize))
        .collect()
}

/// Apply an arbitrary `M`-mode linear circuit through transition
/// permanents: `<t|V|s> = perm(V[t, s]) / sqrt(prod t! prod s!)`, where
/// `V[t, s]` repeats row `k` `t_k` times and column `k` `s_k` times.
///
/// Cost grows with `dim^2` permanents, so this is the reference path
/// rather than the production one.
pub fn apply_multimode<T: Real>(state: &StateVector<T>, v: &TransferMatrix<T>) -> Result<StateVector<T>> {
    let basis = state.basis().clone();
    if v.dim() != basis.modes() {
        return Err(Error::shape(format!(
            "{}-mode transfer matrix applied to {} modes",
            v.dim(),
            basis.modes()
        )));
    }
    v.ensure_unitary(EXTERNAL_TOLERANCE)?;
    let n = basis.photons();
    let rows: Vec<Vec<usize>> = basis.states().map(repeated_modes).collect();
    let norms: Vec<T> = basis
        .states()
        .map(|t| t.iter().map(|&k| factorial::<T>(k as usize)).fold(T::one(), |a, b| a * b).sqrt())
        .collect();
    let mut out = vec![Complex::<T>::zero(); basis.dim()];
    let mut sub = vec![Complex::<T>::zero(); n * n];
    for (s_idx, &amp) in state.amplitudes().iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let cols = &rows[s_idx];
        for (t_idx, slot) in out.iter_mut().enumerate() {
            let r = &rows[t_idx];
            for a in 0..n {
                for b in 0..n {
                    sub[a * n + b] = v[(r[a], cols[b])];
                }
            }
            let p = permanent(&sub, n)?;
            *slot = *slot + amp * p / (norms[t_idx] * norms[s_idx]);
        }
    }
    StateVector::from_amplitudes(basis, out)
}
