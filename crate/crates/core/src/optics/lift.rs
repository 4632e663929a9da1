use num_complex::Complex;
use num_traits::{One, Zero};

use super::TwoModeUnitary;
use crate::fock::StateVector;
use crate::scalar::{binomial, factorial};
use crate::{Error, Real, Result};

/// Fock-space action of a two-mode element, one block per total photon
/// number `s` on the pair.
///
/// `blocks[s][p_out * (s + 1) + p_in]` is the amplitude for
/// `|p_in, s - p_in> -> |p_out, s - p_out>`, where the first entry counts
/// photons in the first mode of the pair.
#[derive(Debug, Clone)]
pub struct PairKernel<T> {
    pub blocks: Vec<Vec<Complex<T>>>,
}

impl<T: Real> PairKernel<T> {
    pub fn max_photons(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Kernel from a per-block amplitude function `f(s, p_in, p_out)`.
    pub fn from_fn(max_photons: usize, mut f: impl FnMut(usize, usize, usize) -> Complex<T>) -> Self {
        let blocks = (0..=max_photons)
            .map(|s| {
                let mut b = vec![Complex::zero(); (s + 1) * (s + 1)];
                for p_in in 0..=s {
                    for p_out in 0..=s {
                        b[p_out * (s + 1) + p_in] = f(s, p_in, p_out);
                    }
                }
                b
            })
            .collect();
        PairKernel { blocks }
    }
}

fn powers<T: Real>(z: Complex<T>, n: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Complex::one();
    for _ in 0..=n {
        out.push(acc);
        acc = acc * z;
    }
    out
}

/// Multiphoton lift of a 2x2 transfer matrix by expanding the transformed
/// creation-operator monomials.
pub fn two_mode_kernel<T: Real>(u: &TwoModeUnitary<T>, max_photons: usize) -> PairKernel<T> {
    let [[u00, u01], [u10, u11]] = u.m;
    let (p00, p01, p10, p11) = (
        powers(u00, max_photons),
        powers(u01, max_photons),
        powers(u10, max_photons),
        powers(u11, max_photons),
    );
    let fact: Vec<T> = (0..=max_photons).map(factorial).collect();
    let blocks = (0..=max_photons)
        .map(|s| {
            let mut b = vec![Complex::zero(); (s + 1) * (s + 1)];
            for n in 0..=s {
                let m = s - n;
                // a_0^dag^n -> sum_a C(n,a) (u00 b_0^dag)^a (u10 b_1^dag)^(n-a)
                // a_1^dag^m -> sum_c C(m,c) (u01 b_0^dag)^c (u11 b_1^dag)^(m-c)
                let norm_in = (fact[n] * fact[m]).sqrt();
                for a in 0..=n {
                    let left = p00[a] * p10[n - a] * binomial::<T>(n, a);
                    for c in 0..=m {
                        let right = p01[c] * p11[m - c] * binomial::<T>(m, c);
                        let p = a + c;
                        let scale = (fact[p] * fact[s - p]).sqrt() / norm_in;
                        b[p * (s + 1) + n] = b[p * (s + 1) + n] + left * right * scale;
                    }
                }
            }
            b
        })
        .collect();
    PairKernel { blocks }
}

/// Apply a pair kernel in place on modes `(i, j)`.
pub(crate) fn apply_pair_kernel_mut<T: Real>(
    state: &mut StateVector<T>,
    modes: (usize, usize),
    kernel: &PairKernel<T>,
) -> Result<()> {
    let basis = state.basis().clone();
    let (i, j) = modes;
    if i >= basis.modes() || j >= basis.modes() || i == j {
        return Err(Error::shape(format!("mode pair ({i}, {j}) invalid for {} modes", basis.modes())));
    }
    if kernel.max_photons() < basis.photons() {
        return Err(Error::shape("kernel built for fewer photons than the state carries"));
    }
    let table = basis.pair_table(i, j);
    let amps = state.amplitudes_mut();
    let mut buf = vec![Complex::<T>::zero(); basis.photons() + 1];
    for (s, flat) in table.groups.iter().enumerate().skip(1) {
        let block = &kernel.blocks[s];
        let w = s + 1;
        for chunk in flat.chunks_exact(w) {
            let mut any = false;
            for (slot, &k) in buf.iter_mut().zip(chunk) {
                *slot = amps[k];
                any |= !slot.is_zero();
            }
            if !any {
                continue;
            }
            for (p_out, &k) in chunk.iter().enumerate() {
                let row = &block[p_out * w..(p_out + 1) * w];
                amps[k] = row.iter().zip(&buf[..w]).fold(Complex::zero(), |acc, (a, b)| acc + a * b);
            }
        }
    }
    // The vacuum-on-pair block is a pure phase.
    let vac = kernel.blocks[0][0];
    if vac != Complex::one() {
        for &k in &table.groups[0] {
            amps[k] = amps[k] * vac;
        }
    }
    Ok(())
}

pub fn apply_pair_kernel<T: Real>(
    state: &StateVector<T>,
    modes: (usize, usize),
    kernel: &PairKernel<T>,
) -> Result<StateVector<T>> {
    let mut out = state.clone();
    apply_pair_kernel_mut(&mut out, modes, kernel)?;
    Ok(out)
}

/// Apply a 2x2 transfer matrix to modes `(i, j)`. Any distinct pair is
/// accepted; mesh circuits only use neighbours.
pub fn apply_two_mode<T: Real>(
    state: &StateVector<T>,
    u: &TwoModeUnitary<T>,
    modes: (usize, usize),
) -> Result<StateVector<T>> {
    let kernel = two_mode_kernel(u, state.basis().photons());
    apply_pair_kernel(state, modes, &kernel)
}
