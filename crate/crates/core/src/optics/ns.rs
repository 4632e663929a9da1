use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::fock::StateVector;
use crate::{Error, Real, Result};

/// Programmable nonlinear sign-shift gate `exp(i chi/2 a^dag^2 a^2)` on one
/// mode: occupation `n` picks up the phase `chi n (n - 1) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NsGate<T> {
    pub chi: T,
    pub mode: usize,
}

impl<T: Real> NsGate<T> {
    pub fn new(chi: T, mode: usize) -> Self {
        NsGate { chi, mode }
    }

    /// Phase factor for each occupation `0..=max_photons`.
    pub fn phases(&self, max_photons: usize) -> Vec<Complex<T>> {
        nonlinear_phases(self.chi, max_photons)
    }
}

pub(crate) fn nonlinear_phases<T: Real>(chi: T, max_photons: usize) -> Vec<Complex<T>> {
    (0..=max_photons)
        .map(|n| {
            let pairs = T::lit((n * n.saturating_sub(1) / 2) as f64);
            T::cis(chi * pairs)
        })
        .collect()
}

fn apply_diagonal_mut<T: Real>(state: &mut StateVector<T>, mode: usize, phases: &[Complex<T>]) -> Result<()> {
    let basis = state.basis().clone();
    if mode >= basis.modes() {
        return Err(Error::shape(format!("mode {mode} out of range for {} modes", basis.modes())));
    }
    for (t, c) in basis.states().zip(state.amplitudes_mut()) {
        let n = t[mode] as usize;
        if n > 0 {
            *c = *c * phases[n];
        }
    }
    Ok(())
}

pub(crate) fn apply_ns_mut<T: Real>(state: &mut StateVector<T>, gate: &NsGate<T>) -> Result<()> {
    let phases = gate.phases(state.basis().photons());
    apply_diagonal_mut(state, gate.mode, &phases)
}

pub fn apply_ns<T: Real>(state: &StateVector<T>, gate: &NsGate<T>) -> Result<StateVector<T>> {
    let mut out = state.clone();
    apply_ns_mut(&mut out, gate)?;
    Ok(out)
}

pub(crate) fn apply_phase_mut<T: Real>(state: &mut StateVector<T>, mode: usize, phi: T) -> Result<()> {
    let phases: Vec<_> = (0..=state.basis().photons()).map(|n| T::cis(phi * T::lit(n as f64))).collect();
    apply_diagonal_mut(state, mode, &phases)
}

/// Linear phase shifter: occupation `n` on `mode` picks up `exp(i phi n)`.
pub fn apply_phase<T: Real>(state: &StateVector<T>, mode: usize, phi: T) -> Result<StateVector<T>> {
    let mut out = state.clone();
    apply_phase_mut(&mut out, mode, phi)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{DualRail, FockBasis};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn random_state(m: usize, n: usize, seed: u64) -> StateVector<f64> {
        let b = Arc::new(FockBasis::new(m, n).unwrap());
        let mut x = seed;
        let amps = (0..b.dim())
            .map(|_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (x >> 33) as f64 / (1u64 << 31) as f64 - 0.5;
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = (x >> 33) as f64 / (1u64 << 31) as f64 - 0.5;
                Complex::new(a, b)
            })
            .collect();
        let mut s = StateVector::from_amplitudes(b, amps).unwrap();
        s.normalize();
        s
    }

    #[test]
    fn single_photon_states_untouched() {
        let code = DualRail::new(3).unwrap();
        let s: StateVector<f64> = code.encode(&[true, false, true]).unwrap();
        for mode in 0..6 {
            let out = apply_ns(&s, &NsGate::new(1.234, mode)).unwrap();
            assert_eq!(out.max_deviation(&s).unwrap(), 0.0);
        }
    }

    #[test]
    fn pi_flips_two_photon_component() {
        let b = Arc::new(FockBasis::new(2, 2).unwrap());
        let s = StateVector::<f64>::basis_state(b, &[2, 0]).unwrap();
        let out = apply_ns(&s, &NsGate::new(PI, 0)).unwrap();
        assert!((out.amplitude(&[2, 0]).unwrap() - Complex::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_strength_is_identity() {
        let s = random_state(4, 3, 7);
        let out = apply_ns(&s, &NsGate::new(0.0, 2)).unwrap();
        assert_eq!(out.max_deviation(&s).unwrap(), 0.0);
    }

    #[test]
    fn gates_on_different_modes_commute() {
        let s = random_state(5, 4, 11);
        let (g1, g2) = (NsGate::new(0.8, 1), NsGate::new(2.9, 3));
        let a = apply_ns(&apply_ns(&s, &g1).unwrap(), &g2).unwrap();
        let b = apply_ns(&apply_ns(&s, &g2).unwrap(), &g1).unwrap();
        assert!(a.max_deviation(&b).unwrap() < 1e-15);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_shifter_scales_with_occupation() {
        let b = Arc::new(FockBasis::new(2, 3).unwrap());
        let s = StateVector::<f64>::basis_state(b, &[3, 0]).unwrap();
        let out = apply_phase(&s, 0, 0.25).unwrap();
        let want = Complex::new(0.75f64.cos(), 0.75f64.sin());
        assert!((out.amplitude(&[3, 0]).unwrap() - want).norm() < 1e-15);
        assert!(apply_phase(&s, 2, 0.1).is_err());
    }
}
