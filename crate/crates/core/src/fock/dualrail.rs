use std::sync::Arc;

use num_complex::Complex;

use super::{FockBasis, StateVector};
use crate::{Error, Real, Result};

/// Weight below which a dual-rail projection is considered empty.
pub const DEGENERATE_WEIGHT: f64 = 1e-14;

/// Dual-rail code on `qubits` photons in `2 * qubits` modes. Qubit `q`
/// (zero-based) lives on modes `(2q, 2q + 1)`; `|0>_L` puts the photon in
/// the first mode. Qubit 0 is the most significant bit of a computational
/// basis index.
#[derive(Debug, Clone)]
pub struct DualRail {
    qubits: usize,
    basis: Arc<FockBasis>,
    // Fock index of each computational basis string.
    codewords: Vec<usize>,
}

/// Renormalized restriction of a Fock state to the code space.
#[derive(Debug, Clone)]
pub struct Projection<T> {
    pub amplitudes: Vec<Complex<T>>,
    /// Squared norm of the code-space component before renormalization.
    pub weight: T,
}

impl DualRail {
    pub fn new(qubits: usize) -> Result<Self> {
        let basis = Arc::new(FockBasis::new(2 * qubits, qubits)?);
        Self::over(basis)
    }

    /// Code over an existing `2N`-mode, `N`-photon basis.
    pub fn over(basis: Arc<FockBasis>) -> Result<Self> {
        let qubits = basis.photons();
        if basis.modes() != 2 * qubits {
            return Err(Error::shape(format!(
                "dual-rail needs 2N modes for N photons, got {} modes and {} photons",
                basis.modes(),
                qubits
            )));
        }
        let codewords = (0..1usize << qubits)
            .map(|x| basis.index_of(&Self::occupation_of(qubits, x)).expect("codeword in basis"))
            .collect();
        Ok(DualRail { qubits, basis, codewords })
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    #[inline]
    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    /// Fock indices of the `2^N` codewords, in computational order.
    pub fn codewords(&self) -> &[usize] {
        &self.codewords
    }

    fn occupation_of(qubits: usize, x: usize) -> Vec<u8> {
        let mut occ = vec![0u8; 2 * qubits];
        for q in 0..qubits {
            let bit = (x >> (qubits - 1 - q)) & 1;
            occ[2 * q + bit] = 1;
        }
        occ
    }

    /// Occupation vector for a bit string (`bits[0]` is qubit 0).
    pub fn occupation(&self, bits: &[bool]) -> Result<Vec<u8>> {
        if bits.len() != self.qubits {
            return Err(Error::shape(format!("{} bits for {} qubits", bits.len(), self.qubits)));
        }
        Ok(Self::occupation_of(self.qubits, bits_to_index(bits)))
    }

    /// Inverse of [`DualRail::occupation`]; `None` outside the code space.
    pub fn decode(&self, occupation: &[u8]) -> Option<Vec<bool>> {
        if occupation.len() != 2 * self.qubits {
            return None;
        }
        occupation
            .chunks_exact(2)
            .map(|pair| match pair {
                [1, 0] => Some(false),
                [0, 1] => Some(true),
                _ => None,
            })
            .collect()
    }

    pub fn encode<T: Real>(&self, bits: &[bool]) -> Result<StateVector<T>> {
        let occ = self.occupation(bits)?;
        StateVector::basis_state(self.basis.clone(), &occ)
    }

    /// Lift `2^N` qubit amplitudes into the Fock space.
    pub fn embed<T: Real>(&self, amplitudes: &[Complex<T>]) -> Result<StateVector<T>> {
        if amplitudes.len() != self.codewords.len() {
            return Err(Error::shape(format!(
                "{} amplitudes for {} qubits",
                amplitudes.len(),
                self.qubits
            )));
        }
        let mut s = StateVector::zeros(self.basis.clone());
        let amps = s.amplitudes_mut();
        for (&k, &c) in self.codewords.iter().zip(amplitudes) {
            amps[k] = c;
        }
        Ok(s)
    }

    pub fn project<T: Real>(&self, state: &StateVector<T>) -> Result<Projection<T>> {
        if !state.basis().same_shape(&self.basis) {
            return Err(Error::shape("state is not over the code's Fock basis"));
        }
        let amps = state.amplitudes();
        let mut out: Vec<Complex<T>> = self.codewords.iter().map(|&k| amps[k]).collect();
        let weight: T = out.iter().map(|c| c.norm_sqr()).sum();
        if weight < T::lit(DEGENERATE_WEIGHT) {
            return Err(Error::DegenerateProjection(weight.as_f64()));
        }
        let norm = weight.sqrt();
        for c in &mut out {
            *c = *c / norm;
        }
        Ok(Projection { amplitudes: out, weight })
    }
}

/// Parse a bit string such as `"0110"`.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::shape(format!("'{other}' is not a bit"))),
        })
        .collect()
}

pub(crate) fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}
