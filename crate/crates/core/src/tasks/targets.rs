use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::fock::{DualRail, StateVector};
use crate::{Error, Real, Result};

/// `cos(alpha) |10>^N + sin(alpha) |01>^N` in the dual-rail Fock space.
pub fn target_ghz<T: Real>(qubits: usize, alpha: T) -> Result<StateVector<T>> {
    if alpha < T::zero() || alpha > T::FRAC_PI_4() + T::lit(1e-12) {
        return Err(Error::Config(format!("alpha {alpha} outside [0, pi/4]")));
    }
    let code = DualRail::new(qubits)?;
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << qubits];
    amps[0] = Complex::new(alpha.cos(), T::zero());
    amps[(1 << qubits) - 1] = amps[(1 << qubits) - 1] + Complex::new(alpha.sin(), T::zero());
    code.embed(&amps)
}

/// Haar-distributed `2^N` amplitudes: complex normals, then normalized.
pub fn haar_amplitudes<T: Real>(qubits: usize, seed: u64) -> Vec<Complex<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<(f64, f64)> = (0..1usize << qubits)
        .map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
    raw.into_iter()
        .map(|(a, b)| Complex::new(T::lit(a / norm), T::lit(b / norm)))
        .collect()
}

/// Haar-random dual-rail target, reproducible from the seed.
pub fn target_haar_random<T: Real>(qubits: usize, seed: u64) -> Result<StateVector<T>> {
    DualRail::new(qubits)?.embed(&haar_amplitudes(qubits, seed))
}

/// `|<out|target>|^2`.
pub fn fidelity<T: Real>(out: &StateVector<T>, target: &StateVector<T>) -> Result<T> {
    Ok(out.overlap(target)?.norm_sqr())
}

pub fn fidelity_cost<T: Real>(out: &StateVector<T>, target: &StateVector<T>) -> Result<T> {
    Ok(T::one() - fidelity(out, target)?)
}
