use std::sync::Arc;

use num_complex::Complex;

use crate::fock::{FockBasis, StateVector};
use crate::network::Circuit;
use crate::{Error, Real, Result};

/// One input state and the Fock state it should be routed to.
#[derive(Clone)]
pub struct LabeledPair<T> {
    pub label: &'static str,
    pub input: StateVector<T>,
    pub target: StateVector<T>,
}

/// The four Bell states, optionally with the two non-dual-rail `Theta`
/// states, on four modes carrying two photons.
#[derive(Clone)]
pub struct DiscriminationSet<T> {
    pairs: Vec<LabeledPair<T>>,
}

/// `(label, sign, input components, output occupation)`.
type Entry = (&'static str, i8, ([u8; 4], [u8; 4]), [u8; 4]);

const PHI: ([u8; 4], [u8; 4]) = ([1, 0, 1, 0], [0, 1, 0, 1]);
const PSI: ([u8; 4], [u8; 4]) = ([1, 0, 0, 1], [0, 1, 1, 0]);
const THETA: ([u8; 4], [u8; 4]) = ([0, 0, 1, 1], [1, 1, 0, 0]);

// Bell states go to the four dual-rail basis states in order, as a Bell measurement would read them.
const ROUTING: [Entry; 6] = [
    ("phi+", 1, PHI, [1, 0, 1, 0]),
    ("phi-", -1, PHI, [1, 0, 0, 1]),
    ("psi+", 1, PSI, [0, 1, 1, 0]),
    ("psi-", -1, PSI, [0, 1, 0, 1]),
    ("theta+", 1, THETA, [0, 0, 1, 1]),
    ("theta-", -1, THETA, [1, 1, 0, 0]),
];

impl<T: Real> std::fmt::Debug for LabeledPair<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LabeledPair")
            .field("label", &self.label)
            .field("input", &self.input)
            .field("target", &self.target)
            .finish()
    }
}

impl<T: Real> std::fmt::Debug for DiscriminationSet<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.pairs).finish()
    }
}

impl<T: Real> DiscriminationSet<T> {
    /// `size` is 4 (Bell states) or 6 (Bell plus `Theta`).
    pub fn new(size: usize) -> Result<Self> {
        if size != 4 && size != 6 {
            return Err(Error::Config(format!("discrimination set size must be 4 or 6, got {size}")));
        }
        let basis = Arc::new(FockBasis::new(4, 2)?);
        let h = T::FRAC_1_SQRT_2();
        let mut pairs = Vec::with_capacity(size);
        for &(label, sign, (a, b), target) in &ROUTING[..size] {
            let sign = if sign < 0 { -T::one() } else { T::one() };
            let mut amps = vec![Complex::new(T::zero(), T::zero()); basis.dim()];
            amps[basis.index_of(&a).expect("in basis")] = Complex::new(h, T::zero());
            amps[basis.index_of(&b).expect("in basis")] = Complex::new(sign * h, T::zero());
            let input = StateVector::from_amplitudes(basis.clone(), amps)?;
            let target = StateVector::basis_state(basis.clone(), &target)?;
            pairs.push(LabeledPair { label, input, target });
        }
        Ok(DiscriminationSet { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[LabeledPair<T>] {
        &self.pairs
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        self.pairs[0].input.basis()
    }
}

/// Average success probability `(1/S) sum_j |<target_j|C input_j>|^2`.
pub fn discrimination_fidelity<T: Real, C: Circuit<T> + ?Sized>(circuit: &C, set: &DiscriminationSet<T>) -> Result<T> {
    let mut total = T::zero();
    for pair in set.pairs() {
        let out = circuit.apply(&pair.input)?;
        total = total + pair.target.overlap(&out)?.norm_sqr();
    }
    Ok(total / T::lit(set.len() as f64))
}

pub fn discrimination_cost<T: Real, C: Circuit<T> + ?Sized>(circuit: &C, set: &DiscriminationSet<T>) -> Result<T> {
    Ok(T::one() - discrimination_fidelity(circuit, set)?)
}
