use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::FockBasis;
use crate::{Error, Real, Result};

/// Dense amplitude vector over a [`FockBasis`].
#[derive(Clone)]
pub struct StateVector<T> {
    basis: Arc<FockBasis>,
    amps: Vec<Complex<T>>,
}

/// One line of the amplitude dump format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub occupation: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

impl<T: Real> StateVector<T> {
    pub fn from_amplitudes(basis: Arc<FockBasis>, amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::shape(format!(
                "{} amplitudes for a basis of dimension {}",
                amps.len(),
                basis.dim()
            )));
        }
        Ok(StateVector { basis, amps })
    }

    pub fn zeros(basis: Arc<FockBasis>) -> Self {
        let amps = vec![Complex::zero(); basis.dim()];
        StateVector { basis, amps }
    }

    /// The Fock state `|occupation>`.
    pub fn basis_state(basis: Arc<FockBasis>, occupation: &[u8]) -> Result<Self> {
        let k = basis
            .index_of(occupation)
            .ok_or_else(|| Error::shape(format!("{occupation:?} is not in the basis")))?;
        let mut s = Self::zeros(basis);
        s.amps[k] = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    /// Normalized superposition of the given `(occupation, amplitude)` terms.
    pub fn superposition(basis: Arc<FockBasis>, terms: &[(&[u8], Complex<T>)]) -> Result<Self> {
        let mut s = Self::zeros(basis);
        for &(occ, c) in terms {
            let k = s
                .basis
                .index_of(occ)
                .ok_or_else(|| Error::shape(format!("{occ:?} is not in the basis")))?;
            s.amps[k] = s.amps[k] + c;
        }
        s.normalize();
        Ok(s)
    }

    #[inline]
    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn amplitude(&self, occupation: &[u8]) -> Option<Complex<T>> {
        self.basis.index_of(occupation).map(|k| self.amps[k])
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > T::zero() {
            for c in &mut self.amps {
                *c = *c / n;
            }
        }
    }

    pub(crate) fn check_basis(&self, other: &StateVector<T>) -> Result<()> {
        if self.basis.same_shape(&other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                left_modes: self.basis.modes(),
                left_photons: self.basis.photons(),
                right_modes: other.basis.modes(),
                right_photons: other.basis.photons(),
            })
        }
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &StateVector<T>) -> Result<Complex<T>> {
        self.check_basis(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Largest elementwise distance to `other`.
    pub fn max_deviation(&self, other: &StateVector<T>) -> Result<T> {
        self.check_basis(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    /// Amplitudes in basis order as dump records.
    pub fn to_dump(&self) -> Vec<AmplitudeRecord> {
        self.basis
            .states()
            .zip(&self.amps)
            .map(|(t, c)| AmplitudeRecord {
                occupation: t.to_vec(),
                re: c.re.as_f64(),
                im: c.im.as_f64(),
            })
            .collect()
    }

    /// Rebuild a state from dump records. Records may come in any order;
    /// missing occupations get zero amplitude.
    pub fn from_dump(basis: Arc<FockBasis>, records: &[AmplitudeRecord]) -> Result<Self> {
        let mut s = Self::zeros(basis);
        for r in records {
            let k = s.basis.index_of(&r.occupation).ok_or_else(|| {
                Error::shape(format!("{:?} is not in the basis", r.occupation))
            })?;
            s.amps[k] = Complex::new(T::lit(r.re), T::lit(r.im));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_dump())?)
    }

    /// Parse an amplitude dump. The basis shape is inferred from the first
    /// record.
    pub fn from_json(text: &str) -> Result<Self> {
        let records: Vec<AmplitudeRecord> = serde_json::from_str(text)?;
        let first = records
            .first()
            .ok_or_else(|| Error::shape("empty amplitude dump"))?;
        let modes = first.occupation.len();
        let photons = first.occupation.iter().map(|&n| n as usize).sum();
        let basis = Arc::new(FockBasis::new(modes, photons)?);
        Self::from_dump(basis, &records)
    }
}

impl<T: Real> std::fmt::Debug for StateVector<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut list = f.debug_map();
        for (t, c) in self.basis.states().zip(&self.amps) {
            if c.norm_sqr() > T::lit(1e-24) {
                list.entry(&t, c);
            }
        }
        list.finish()
    }
}
